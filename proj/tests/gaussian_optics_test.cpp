#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sqzkit/gaussian_optics.hpp"

using namespace sqzkit;
using namespace sqzkit::units;

namespace {

constexpr double kLambda = 1.064 * um;
constexpr double kRc = 5.0 * mm;

// Values below were computed with 40-digit mpmath evaluations of the
// closed forms.
constexpr double kZrSf = 2.837472312123864e-05;
constexpr double kZrPcf = 1.660851379364905e-04;
constexpr double kDSf = 4.999838969831416e-03;
constexpr double kDPcf = 4.994477044784461e-03;
constexpr double kSpotSf = 5.462520404164713e-04;
constexpr double kSpotPcf = 2.256630765468829e-04;

}  // namespace

TEST(RayleighRange, MatchesHighPrecisionValues) {
  EXPECT_NEAR(rayleigh_range(GaussianBeam(3.1 * um, kLambda)), kZrSf, 1e-12 * kZrSf);
  EXPECT_NEAR(rayleigh_range(GaussianBeam(7.5 * um, kLambda)), kZrPcf, 1e-12 * kZrPcf);
}

TEST(RayleighRange, QuadraticInWaist) {
  const double z1 = rayleigh_range(GaussianBeam(3.1 * um, kLambda));
  const double z2 = rayleigh_range(GaussianBeam(6.2 * um, kLambda));
  EXPECT_DOUBLE_EQ(z2, 4.0 * z1);
}

TEST(GaussianBeam, RejectsInvalidFields) {
  EXPECT_THROW(GaussianBeam(0.0, kLambda), DomainError);
  EXPECT_THROW(GaussianBeam(1 * um, -1.0), DomainError);
  EXPECT_THROW(GaussianBeam(1 * um, kLambda, 0.9), DomainError);
}

TEST(ConfocalCrystalLength, TwiceRayleighRangeInMedium) {
  const GaussianBeam air(3.1 * um, kLambda);
  EXPECT_NEAR(confocal_crystal_length(air.in_medium(kKtpIndex)), 1.038514866237334e-4, 1e-15);
  EXPECT_NEAR(confocal_crystal_length(air), 5.674944624247728e-5, 1e-15);

  // Waist chosen so that z_R = 1 m exactly.
  const double w = std::sqrt(kLambda / kPi);
  EXPECT_NEAR(confocal_crystal_length(GaussianBeam(w, kLambda)), 2.0, 1e-12);
}

TEST(HemisphericalWaist, ClosedFormCases) {
  EXPECT_NEAR(hemispherical_waist(CavityGeometry(kRc, kRc / 2), kLambda),
              2.909818374484709e-05, 1e-15);
  // One nanometre short of the curvature radius the waist collapses to
  // well under a micron.
  EXPECT_NEAR(hemispherical_waist(CavityGeometry(kRc, kRc - 1 * nm), kLambda),
              8.702386284602276e-07, 1e-15);
}

TEST(HemisphericalWaist, UnstableGeometryThrows) {
  EXPECT_THROW(hemispherical_waist(CavityGeometry(kRc, kRc), kLambda), StabilityError);
  EXPECT_THROW(hemispherical_waist(CavityGeometry(kRc, 1.2 * kRc), kLambda), StabilityError);
}

TEST(CavityLengthForWaist, NearHemisphericalRoot) {
  const auto sf = cavity_length_for_waist(3.1 * um, kRc, kLambda);
  EXPECT_NEAR(sf.near_hemispherical, kDSf, 1e-15);
  EXPECT_NEAR(sf.hemispherical_gap(kRc), 161.0301685844298 * nm, 1e-15);
  EXPECT_NEAR(sf.near_planar, 161.0301685844298 * nm, 1e-15);
  EXPECT_NEAR(cavity_length_for_waist(7.5 * um, kRc, kLambda).near_hemispherical, kDPcf, 1e-15);
}

TEST(CavityLengthForWaist, AgreesWithBisectionOracle) {
  for (double w : {3.1 * um, 6.5 * um, 7.5 * um, 20.0 * um}) {
    const double d = cavity_length_for_waist(w, kRc, kLambda).near_hemispherical;
    EXPECT_NEAR(d, oracle::bisect_cavity_length(w, kRc, kLambda), 1e-13) << w;
  }
}

TEST(CavityLengthForWaist, RootsCoincideAtMaximumWaist) {
  // z_R = Rc / 2.
  const double w = std::sqrt(kRc / 2 * kLambda / kPi);
  const auto r = cavity_length_for_waist(w, kRc, kLambda);
  EXPECT_NEAR(r.near_hemispherical, kRc / 2, 1e-9 * kRc);
  EXPECT_NEAR(r.near_planar, kRc / 2, 1e-9 * kRc);
}

TEST(CavityLengthForWaist, WaistTooLargeThrows) {
  EXPECT_THROW(cavity_length_for_waist(40 * um, kRc, kLambda), NoSolutionError);
}

TEST(CavityLengthForWaist, InverseOfHemisphericalWaist) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> waist(1.0 * um, 28.0 * um);
  for (int i = 0; i < 500; ++i) {
    const double w = waist(rng);
    const double d = cavity_length_for_waist(w, kRc, kLambda).near_hemispherical;
    const double back = hemispherical_waist(CavityGeometry(kRc, d), kLambda);
    EXPECT_NEAR(back, w, 1e-9 * w);
  }
}

TEST(BeamRadiusAt, ClosedFormAndLandmarks) {
  const GaussianBeam sf(3.1 * um, kLambda);
  EXPECT_NEAR(beam_radius_at(sf, kDSf), kSpotSf, 1e-12 * kSpotSf);
  EXPECT_DOUBLE_EQ(beam_radius_at(sf, 0.0), 3.1 * um);
  EXPECT_NEAR(beam_radius_at(sf, rayleigh_range(sf)), 3.1 * um * std::sqrt(2.0), 1e-18);
}

TEST(BeamRadiusAt, EvenAndMonotoneInDistance) {
  const GaussianBeam b(5 * um, kLambda);
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double z = i * 20 * um;
    EXPECT_DOUBLE_EQ(beam_radius_at(b, z), beam_radius_at(b, -z));
    EXPECT_GT(beam_radius_at(b, z), prev);
    prev = beam_radius_at(b, z);
  }
}

TEST(ParaxialFigureOfMerit, FiberCases) {
  const GaussianBeam sf(3.1 * um, kLambda);
  EXPECT_NEAR(paraxial_figure_of_merit(CavityGeometry(kRc, kDSf), sf), kSpotSf / kRc, 1e-12);
  const GaussianBeam pcf(7.5 * um, kLambda);
  EXPECT_NEAR(paraxial_figure_of_merit(CavityGeometry(kRc, kDPcf), pcf), kSpotPcf / kRc, 1e-12);
  EXPECT_NEAR(kSpotSf / kRc, 0.109, 5e-4);
  EXPECT_NEAR(kSpotPcf / kRc, 0.045, 5e-4);
}

TEST(ParaxialFigureOfMerit, ShorterCavityImprovesAtFixedWaist) {
  const GaussianBeam b(3.1 * um, kLambda);
  double prev = 1e9;
  for (double d = 4.9 * mm; d > 0.5 * mm; d -= 0.2 * mm) {
    const double fom = paraxial_figure_of_merit(CavityGeometry(kRc, d), b);
    EXPECT_LT(fom, prev);
    prev = fom;
  }
}

TEST(GaussianOverlap, FlatCases) {
  const GaussianBeam a(3.1 * um, kLambda);
  EXPECT_DOUBLE_EQ(gaussian_overlap(a, a), 1.0);
  EXPECT_NEAR(gaussian_overlap(a, GaussianBeam(6.2 * um, kLambda)), 0.64, 1e-15);
  EXPECT_NEAR(gaussian_overlap(a, a, kFlat, kFlat, 0.93), 0.93, 1e-15);
}

TEST(GaussianOverlap, CurvatureMismatchMatchesOverlapIntegral) {
  const double w = 3.1 * um;
  const GaussianBeam a(w, kLambda);
  for (double r : {0.2 * mm, 1.0 * mm, 5.0 * mm}) {
    const double eta = gaussian_overlap(a, a, r, kFlat);
    const double numeric = oracle::overlap_integral(w, r, w, kFlat, kLambda);
    EXPECT_NEAR(eta, numeric, 1e-10) << r;
    const double closed = 1.0 / (1.0 + std::pow(kPi * w * w / (2.0 * kLambda * r), 2));
    EXPECT_NEAR(eta, closed, 1e-14) << r;
  }
}

TEST(GaussianOverlap, GeneralCaseMatchesOverlapIntegral) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(2 * um, 12 * um);
  std::uniform_real_distribution<double> inv_r(-2000.0, 2000.0);  // 1/m
  for (int i = 0; i < 25; ++i) {
    const double wa = w(rng), wb = w(rng);
    const double ra = 1.0 / inv_r(rng), rb = 1.0 / inv_r(rng);
    const double eta = gaussian_overlap(GaussianBeam(wa, kLambda), GaussianBeam(wb, kLambda), ra, rb);
    EXPECT_NEAR(eta, oracle::overlap_integral(wa, ra, wb, rb, kLambda), 1e-9);
  }
}

TEST(GaussianOverlap, SymmetricBoundedAndOneOnlyForIdenticalModes) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(1 * um, 20 * um);
  std::uniform_real_distribution<double> inv_r(-500.0, 500.0);
  for (int i = 0; i < 1000; ++i) {
    const GaussianBeam a(w(rng), kLambda), b(w(rng), kLambda);
    const double ra = 1.0 / inv_r(rng), rb = 1.0 / inv_r(rng);
    const double ab = gaussian_overlap(a, b, ra, rb);
    EXPECT_DOUBLE_EQ(ab, gaussian_overlap(b, a, rb, ra));
    EXPECT_LT(ab, 1.0);
    EXPECT_GT(ab, 0.0);
    EXPECT_NEAR(gaussian_overlap(a, a, ra, ra), 1.0, 1e-15);
  }
}

TEST(GaussianOverlap, RejectsMismatchedWavelengths) {
  EXPECT_THROW(gaussian_overlap(GaussianBeam(3 * um, kLambda), GaussianBeam(3 * um, 532 * nm)),
               DomainError);
}
