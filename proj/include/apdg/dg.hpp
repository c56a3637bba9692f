#ifndef APDG_DG_HPP_
#define APDG_DG_HPP_

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace apdg {

class VelocityGrid;
class CollisionKernel;

/// Uniform partition of [x_left, x_right] into n_cells cells.
struct Mesh1D {
  Mesh1D(double x_left, double x_right, int n_cells);

  double x_left;
  double x_right;
  int n_cells;
  double h;

  /// x_{i+1/2} for i = 0..n_cells.
  double interface(int i) const { return x_left + i * h; }
  /// Center of cell i (0-based).
  double center(int i) const { return x_left + (i + 0.5) * h; }
  double length() const { return x_right - x_left; }
};

/// Orthonormal scaled-Legendre modal basis of degree k on a reference cell,
/// together with the Gauss-Legendre (k+1 points) and Gauss-Lobatto (k+2
/// points) sample sets. Physical values carry the factor sqrt(2/h).
class DGBasis {
 public:
  explicit DGBasis(int degree);

  int degree() const { return degree_; }
  int n_modes() const { return degree_ + 1; }
  int n_quad() const { return static_cast<int>(gauss_points_.size()); }

  std::span<const double> gauss_points() const { return gauss_points_; }
  std::span<const double> gauss_weights() const { return gauss_weights_; }
  std::span<const double> lobatto_points() const { return lobatto_points_; }

  /// Reference basis P_m(xi) * sqrt((2m+1)/2), orthonormal on [-1, 1].
  double value(int mode, double xi) const;
  double derivative(int mode, double xi) const;

  /// Reference values at Gauss points, laid out [q * n_modes + m].
  std::span<const double> gauss_values() const { return gauss_values_; }
  std::span<const double> left_values() const { return left_values_; }
  std::span<const double> right_values() const { return right_values_; }
  std::span<const double> center_values() const { return center_values_; }
  /// Reference stiffness S(m, n) = int P_n P_m' dxi, laid out [m * n_modes + n].
  std::span<const double> stiffness() const { return stiffness_; }

 private:
  int degree_;
  std::vector<double> gauss_points_;
  std::vector<double> gauss_weights_;
  std::vector<double> lobatto_points_;
  std::vector<double> gauss_values_;
  std::vector<double> left_values_;
  std::vector<double> right_values_;
  std::vector<double> center_values_;
  std::vector<double> stiffness_;
};

/// Gauss-Legendre rule with n points on [-1, 1].
void gauss_legendre(int n, std::vector<double> &points, std::vector<double> &weights);
/// Gauss-Lobatto points (n >= 2) on [-1, 1], endpoints included.
std::vector<double> gauss_lobatto_points(int n);
double legendre(int n, double xi);

/// One member of V_h^k: coefficient matrix of shape (n_cells, n_modes).
struct ScalarDGField {
  ScalarDGField() = default;
  ScalarDGField(int n_cells, int n_modes) : n_cells(n_cells), n_modes(n_modes),
                                            coef(static_cast<std::size_t>(n_cells) * n_modes) {}

  double &operator()(int cell, int mode) { return coef[static_cast<std::size_t>(cell) * n_modes + mode]; }
  double operator()(int cell, int mode) const {
    return coef[static_cast<std::size_t>(cell) * n_modes + mode];
  }

  int n_cells = 0;
  int n_modes = 0;
  std::vector<double> coef;
};

/// One DG field per velocity node; storage index ((cell * n_modes + mode) * n_nodes + node).
struct ParityField {
  ParityField() = default;
  ParityField(int n_cells, int n_modes, int n_nodes)
      : n_cells(n_cells), n_modes(n_modes), n_nodes(n_nodes),
        data(static_cast<std::size_t>(n_cells) * n_modes * n_nodes) {}

  std::size_t index(int cell, int mode, int node) const {
    return (static_cast<std::size_t>(cell) * n_modes + mode) * n_nodes + node;
  }
  double &operator()(int cell, int mode, int node) { return data[index(cell, mode, node)]; }
  double operator()(int cell, int mode, int node) const { return data[index(cell, mode, node)]; }

  ScalarDGField slice(int node) const;
  void set_slice(int node, const ScalarDGField &field);

  int n_cells = 0;
  int n_modes = 0;
  int n_nodes = 0;
  std::vector<double> data;
};

enum class Side { left, right };
enum class LVariant { plus, minus };

/// Point evaluation of a field inside cell `cell` at reference coordinate xi.
double evaluate(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &field, int cell,
                double xi);
/// Evaluation at a physical point; the right-most interface belongs to the last cell.
double evaluate_at(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &field, double x);

/// L2 projection onto V_h^k using the basis' Gauss rule.
ScalarDGField project(const Mesh1D &mesh, const DGBasis &basis,
                      const std::function<double(double)> &fn);

/// Trace at interface x_{i+1/2} (i = 0..n_cells). Side::left returns u^- (from
/// cell i-1 in 0-based numbering), Side::right returns u^+ (from cell i).
/// Periodic meshes wrap around; otherwise an out-of-mesh side throws.
double trace(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &field, int interface,
             Side side, bool periodic);
double jump(double minus, double plus);
double average(double minus, double plus);

/// Interface flux values psi^{+-}_{i+1/2} for i = 0..n_cells (periodic closure).
std::vector<double> interface_fluxes(const DGBasis &basis, const Mesh1D &mesh,
                                     const ScalarDGField &psi, LVariant variant);

/// Values L(psi, phi_m) against every basis function, given the single-valued
/// interface fluxes psi_hat (length n_cells + 1). The result is laid out like
/// a ScalarDGField.
ScalarDGField apply_L_with_fluxes(const DGBasis &basis, const Mesh1D &mesh,
                                  const ScalarDGField &psi, std::span<const double> psi_hat);
/// L^{+-}(psi, .) with periodic closure.
ScalarDGField apply_L(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &psi,
                      LVariant variant);
/// Bilinear form L^{+-}(psi, u) for two fields.
double bilinear_L(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &psi,
                  const ScalarDGField &u, LVariant variant);

/// Same as apply_L_with_fluxes for every velocity node of a parity field;
/// psi_hat is laid out [interface * n_nodes + node].
ParityField apply_L_parity(const DGBasis &basis, const Mesh1D &mesh, const ParityField &psi,
                           std::span<const double> psi_hat);
/// Periodic interface fluxes for every velocity node, [interface * n_nodes + node].
std::vector<double> interface_fluxes_parity(const DGBasis &basis, const Mesh1D &mesh,
                                            const ParityField &psi, LVariant variant);

double integrate_x(const Mesh1D &mesh, const ScalarDGField &field);
/// Integral of the pointwise product of two fields.
double integrate_product(const Mesh1D &mesh, const ScalarDGField &a, const ScalarDGField &b);
double l2_norm_x(const ScalarDGField &field);

/// Field values at Gauss points, laid out [(cell * n_quad + q) * n_nodes + node].
std::vector<double> to_quadrature(const DGBasis &basis, const Mesh1D &mesh, const ParityField &f);
/// Inverse of to_quadrature for k+1 Gauss points (the L2 projection of the samples).
ParityField from_quadrature(const DGBasis &basis, const Mesh1D &mesh,
                            std::span<const double> samples, int n_nodes);
std::vector<double> scalar_to_quadrature(const DGBasis &basis, const Mesh1D &mesh,
                                         const ScalarDGField &f);
ScalarDGField scalar_from_quadrature(const DGBasis &basis, const Mesh1D &mesh,
                                     std::span<const double> samples);
/// Physical coordinates of every Gauss point, [cell * n_quad + q].
std::vector<double> quadrature_coordinates(const DGBasis &basis, const Mesh1D &mesh);

/// Density field: sum over velocity nodes with the grid's density weights.
ScalarDGField density(const VelocityGrid &grid, const ParityField &g);

/// |||g||| = (int int g^2 lambda / M dv dx)^{1/2} for nodal samples g.
double phase_norm(const ParityField &g, const VelocityGrid &grid, const CollisionKernel &kernel);
/// As phase_norm, with the x-integrand weighted by weight(x) >= 0 sampled at
/// Gauss points ([cell * n_quad + q]).
double phase_norm_weighted(const DGBasis &basis, const Mesh1D &mesh, const ParityField &g,
                           const VelocityGrid &grid, const CollisionKernel &kernel,
                           std::span<const double> weight_at_quad);

/// CSV emission: one row per Gauss point (x, value) and one row per cell (x_center, average).
void write_pointwise_csv(std::ostream &os, const DGBasis &basis, const Mesh1D &mesh,
                         const ScalarDGField &field, const char *value_name);
void write_cell_average_csv(std::ostream &os, const Mesh1D &mesh, const ScalarDGField &field,
                            const char *value_name);

}  // namespace apdg

#endif  // APDG_DG_HPP_
