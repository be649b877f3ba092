#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "emi/grid.hpp"
#include "emi/sparse.hpp"

namespace emi {

/// tau is the time-step over membrane-capacitance ratio; sigma_e and
/// sigma_i are the bulk conductivities.
struct EmiParameters {
  double tau = 1.0;
  double sigma_e = 1.0;
  double sigma_i = 1.0;

  void validate() const;
};

/// Membrane source f(x, y).
using SourceFn = std::function<double(double, double)>;

/// sin(2 pi x) sin(2 pi y)
double sine_source(double x, double y);

/// Q1 Laplacian on one subdomain, indexed subdomain-locally as
/// [interior | membrane] (the order of that subdomain's global block).
/// No boundary conditions are applied, so every row sums to zero.
SparseMatrix assemble_stiffness(const DofClassification& dofs, Subdomain subdomain,
                                double sigma);

/// Membrane trace matrices restricted to the N_gamma membrane DOFs.
/// `coupling` has rows on e_gamma and columns on i_gamma and is entrywise
/// nonnegative; it enters the system with a minus sign.
struct MembraneBlocks {
  SparseMatrix mass_extra;
  SparseMatrix mass_intra;
  SparseMatrix coupling;
};

MembraneBlocks assemble_membrane(const DofClassification& dofs);

/// Membrane load: -int_Gamma f phi_e on e_gamma, +int_Gamma f phi_i on i_gamma,
/// zero elsewhere. Two-point Gauss per membrane edge.
std::vector<double> assemble_rhs(const DofClassification& dofs, const SourceFn& source);

/// 1/||1|| in every entry.
std::vector<double> unit_rhs(std::size_t n);

struct EmiSystem {
  DofClassification dofs;
  EmiParameters params;
  /// Unscaled (tau-free) subdomain stiffness, subdomain-local indexing.
  SparseMatrix stiffness_extra;
  SparseMatrix stiffness_intra;
  MembraneBlocks membrane;
  /// A_n in the global ordering, Dirichlet DOFs eliminated symmetrically.
  SparseMatrix matrix;
  std::vector<double> rhs;

  std::size_t size() const { return matrix.rows(); }
};

/// Builds the block system
///
///   [ tau A_e^in      tau A_e^{in,G}          0               0              ]
///   [ tau A_e^{G,in}  tau A_e^G + M_e^G       0              -T_ei^G         ]
///   [ 0               0                      tau A_i^in      tau A_i^{in,G}  ]
///   [ 0              -(T_ei^G)^T             tau A_i^{G,in}  tau A_i^G + M_i^G]
///
/// so the membrane part is the Gram matrix of u_e - u_i on Gamma. Homogeneous
/// Dirichlet DOFs on the outer boundary keep their diagonal and lose all
/// off-diagonal couplings; their load is zero.
EmiSystem assemble_system(const DofClassification& dofs, const EmiParameters& params,
                          const SourceFn& source = sine_source);

/// Global n x n embedding of the membrane blocks (with the coupling sign
/// used by A_n), times `scale`.
SparseMatrix membrane_operator(const DofClassification& dofs, const MembraneBlocks& blocks,
                               double scale = 1.0);

/// Global n x n tau-free bulk operator: both stiffness blocks with the
/// Dirichlet treatment of A_n.
SparseMatrix bulk_operator(const EmiSystem& sys);

/// tau^{-1} A_n = bulk + membrane, with the membrane part of rank <= 2 N_gamma.
struct SplitPair {
  SparseMatrix bulk;
  SparseMatrix membrane;
  std::size_t rank_bound = 0;
};

SplitPair split_bulk_membrane(const EmiSystem& sys);

}  // namespace emi
