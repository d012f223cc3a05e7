#pragma once

#include "fanopair/dynamics.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fanopair {

enum class GridKind { Uniform, Adapted, AdaptedWindow, Custom };

/// How to build a grid for a model. `span` is the half-width in units of
/// the reference width Gamma_ref = max(Gamma_a, Gamma_b).
struct GridSpec {
    GridKind kind = GridKind::Adapted;
    int points = 513;
    double span = 12.0;
};

struct EnergyGrid {
    std::vector<double> axis_a, axis_b;
    std::vector<double> weights_a, weights_b;
    double center = 1.0;
    double half_width = 0.0;  // 0 for rules covering the whole line
    int points = 0;
    GridKind kind = GridKind::Custom;
};

double reference_width(const Model& model);

EnergyGrid make_grid(const Model& model, const GridSpec& spec = {});
EnergyGrid uniform_grid(double center, double half_width, int G);
EnergyGrid grid_from_rules(const Rule& a, const Rule& b, double center);

struct JointSpectrum {
    EnergyGrid grid;
    Eigen::MatrixXcd amplitude;  // rows E_a, columns E_b
    Eigen::MatrixXd intensity;
    double norm = 0.0;           // quadrature norm of the stored amplitude
    double raw_norm = 0.0;       // quadrature norm before normalization
    bool normalized = false;
};

struct SampleOptions {
    bool normalize = false;
    bool check_tails = true;
};

JointSpectrum sample_joint(const Model& model, const EnergyGrid& grid, const SampleOptions& opts = {});

struct MarginalSpectrum {
    std::vector<double> energies, weights, intensity;
};

MarginalSpectrum marginal(const JointSpectrum& joint, Atom axis);

/// I_j(E) = int dE' |d_inf|^2 evaluated with a pole-adapted rule on the
/// partner axis, independent of any tensor grid.
std::vector<double> marginal_profile(const Model& model, Atom axis, const std::vector<double>& energies,
                                     int inner_points = 1025);

struct MomentOptions {
    /// |E - E_L| cut applied to both axes; <= 0 keeps the whole grid
    double window = 0.0;
    bool centered = false;  // subtract means (Pearson form)
};

double moments(const JointSpectrum& joint, int k, int l, const MomentOptions& opts = {});
double covariance(const JointSpectrum& joint, const MomentOptions& opts = {});

/// Grid restricted to |E - E_L| <= span * Gamma_ref on both axes, built
/// from the pole-adapted rules; used for moments and covariance.
EnergyGrid moment_grid(const Model& model, int points = 513, double span = 12.0);

/// Windowed covariance of a model computed on its moment grid.
double model_covariance(const Model& model, bool centered = false, int points = 513, double span = 12.0);

enum class FeatureKind { Peak, Dip };

struct Feature {
    FeatureKind kind;
    double energy;
    double value;
    double sharpness;  // |f''| of the fitted parabola over the global maximum
};

std::vector<Feature> find_features(const std::vector<double>& energies, const std::vector<double>& values,
                                   double threshold = 1e-9);
std::vector<Feature> find_features(const MarginalSpectrum& marginal, double threshold = 1e-9);

void write_joint_csv(std::ostream& out, const JointSpectrum& joint, const std::string& header);
void write_marginal_csv(std::ostream& out, const MarginalSpectrum& marginal, const std::string& header);

}  // namespace fanopair
