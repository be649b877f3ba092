#include "emi/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace emi {

namespace {

bool on_lattice(double coord, int n) {
  const double scaled = coord * n;
  return std::abs(scaled - std::round(scaled)) < 1e-10;
}

bool is_default_cell(const CellBox& c) {
  return c.x0 == 0.25 && c.y0 == 0.25 && c.x1 == 0.75 && c.y1 == 0.75;
}

}  // namespace

void GridSpec::validate() const {
  if (p != 1) {
    throw std::invalid_argument("GridSpec: element order p=" + std::to_string(p) +
                                " is not supported (only p=1)");
  }
  if (N < 4) {
    throw std::invalid_argument("GridSpec: N=" + std::to_string(N) + " must be at least 4");
  }
  if (is_default_cell(cell) && N % 4 != 0) {
    throw std::invalid_argument("GridSpec: N=" + std::to_string(N) +
                                " must be divisible by 4 so the cell corners at 0.25/0.75 "
                                "land on grid nodes");
  }
  if (!(0.0 < cell.x0 && cell.x0 < cell.x1 && cell.x1 < 1.0 && 0.0 < cell.y0 &&
        cell.y0 < cell.y1 && cell.y1 < 1.0)) {
    throw std::invalid_argument("GridSpec: cell box must lie strictly inside (0,1)^2");
  }
  for (double c : {cell.x0, cell.y0, cell.x1, cell.y1}) {
    if (!on_lattice(c, N)) {
      throw std::invalid_argument("GridSpec: cell corner coordinate " + std::to_string(c) +
                                  " does not land on a grid node for N=" + std::to_string(N));
    }
  }
}

IndexRange DofClassification::range(DofClass c) const {
  switch (c) {
    case DofClass::kExtraInterior: return e_in_;
    case DofClass::kExtraMembrane: return e_gamma_;
    case DofClass::kIntraInterior: return i_in_;
    case DofClass::kIntraMembrane: return i_gamma_;
  }
  throw std::logic_error("unreachable");
}

IndexRange DofClassification::subdomain_range(Subdomain s) const {
  return s == Subdomain::kExtra ? IndexRange{e_in_.begin, e_gamma_.end}
                                : IndexRange{i_in_.begin, i_gamma_.end};
}

DofClass DofClassification::dof_class(std::size_t dof) const {
  if (e_in_.contains(dof)) return DofClass::kExtraInterior;
  if (e_gamma_.contains(dof)) return DofClass::kExtraMembrane;
  if (i_in_.contains(dof)) return DofClass::kIntraInterior;
  if (i_gamma_.contains(dof)) return DofClass::kIntraMembrane;
  throw std::out_of_range("DofClassification: dof " + std::to_string(dof) + " out of range");
}

Subdomain DofClassification::subdomain(std::size_t dof) const {
  const DofClass c = dof_class(dof);
  return (c == DofClass::kExtraInterior || c == DofClass::kExtraMembrane) ? Subdomain::kExtra
                                                                          : Subdomain::kIntra;
}

Point DofClassification::coordinate(std::size_t dof) const {
  const LatticeNode node = lattice_.at(dof);
  return {node.ix * h(), node.iy * h()};
}

bool DofClassification::is_dirichlet(std::size_t dof) const {
  if (!e_in_.contains(dof)) return false;
  const LatticeNode node = lattice_[dof];
  return node.ix == 0 || node.iy == 0 || node.ix == n_elements_ || node.iy == n_elements_;
}

std::vector<std::size_t> DofClassification::dirichlet_dofs() const {
  std::vector<std::size_t> out;
  for (std::size_t d = e_in_.begin; d < e_in_.end; ++d)
    if (is_dirichlet(d)) out.push_back(d);
  return out;
}

std::optional<std::size_t> DofClassification::dof_at(Subdomain s, int ix, int iy) const {
  if (ix < 0 || iy < 0 || ix > n_elements_ || iy > n_elements_) return std::nullopt;
  const auto idx = static_cast<std::size_t>(iy) * static_cast<std::size_t>(n_elements_ + 1) +
                   static_cast<std::size_t>(ix);
  const std::int64_t v = s == Subdomain::kExtra ? extra_lookup_[idx] : intra_lookup_[idx];
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

DofClassification build_grid(const GridSpec& spec) {
  spec.validate();
  DofClassification d;
  const int n = spec.N;
  d.n_elements_ = n;
  d.order_ = spec.p;
  d.cell_ = spec.cell;
  d.lo_x_ = static_cast<int>(std::lround(spec.cell.x0 * n));
  d.lo_y_ = static_cast<int>(std::lround(spec.cell.y0 * n));
  d.hi_x_ = static_cast<int>(std::lround(spec.cell.x1 * n));
  d.hi_y_ = static_cast<int>(std::lround(spec.cell.y1 * n));

  const auto inside = [&](int ix, int iy) {
    return ix > d.lo_x_ && ix < d.hi_x_ && iy > d.lo_y_ && iy < d.hi_y_;
  };
  const auto on_membrane = [&](int ix, int iy) {
    return ix >= d.lo_x_ && ix <= d.hi_x_ && iy >= d.lo_y_ && iy <= d.hi_y_ && !inside(ix, iy);
  };

  std::vector<LatticeNode> e_in, i_in, gamma;
  for (int iy = 0; iy <= n; ++iy) {
    for (int ix = 0; ix <= n; ++ix) {
      if (inside(ix, iy)) {
        i_in.push_back({ix, iy});
      } else if (!on_membrane(ix, iy)) {
        e_in.push_back({ix, iy});
      }
    }
  }
  // Counter-clockwise from the lower-left corner: bottom, right, top, left.
  for (int ix = d.lo_x_; ix < d.hi_x_; ++ix) gamma.push_back({ix, d.lo_y_});
  for (int iy = d.lo_y_; iy < d.hi_y_; ++iy) gamma.push_back({d.hi_x_, iy});
  for (int ix = d.hi_x_; ix > d.lo_x_; --ix) gamma.push_back({ix, d.hi_y_});
  for (int iy = d.hi_y_; iy > d.lo_y_; --iy) gamma.push_back({d.lo_x_, iy});

  std::size_t offset = 0;
  const auto place = [&](const std::vector<LatticeNode>& nodes) {
    IndexRange r{offset, offset + nodes.size()};
    d.lattice_.insert(d.lattice_.end(), nodes.begin(), nodes.end());
    offset = r.end;
    return r;
  };
  d.e_in_ = place(e_in);
  d.e_gamma_ = place(gamma);
  d.i_in_ = place(i_in);
  d.i_gamma_ = place(gamma);

  const std::size_t lattice_size = static_cast<std::size_t>(n + 1) * (n + 1);
  d.extra_lookup_.assign(lattice_size, -1);
  d.intra_lookup_.assign(lattice_size, -1);
  const auto key = [n](LatticeNode node) {
    return static_cast<std::size_t>(node.iy) * static_cast<std::size_t>(n + 1) +
           static_cast<std::size_t>(node.ix);
  };
  for (std::size_t k = d.e_in_.begin; k < d.e_gamma_.end; ++k)
    d.extra_lookup_[key(d.lattice_[k])] = static_cast<std::int64_t>(k);
  for (std::size_t k = d.i_in_.begin; k < d.i_gamma_.end; ++k)
    d.intra_lookup_[key(d.lattice_[k])] = static_cast<std::int64_t>(k);
  return d;
}

std::vector<GammaPair> gamma_pairing(const DofClassification& dofs) {
  std::vector<GammaPair> pairs;
  pairs.reserve(dofs.n_gamma());
  const IndexRange e = dofs.extra_membrane();
  const IndexRange i = dofs.intra_membrane();
  for (std::size_t j = 0; j < e.size(); ++j) pairs.push_back({e.begin + j, i.begin + j});
  return pairs;
}

std::size_t expected_dof_count(int N, int p) {
  const auto np = static_cast<std::size_t>(N) * static_cast<std::size_t>(p);
  return (np + 1) * (np + 1) + 2 * np;
}

std::string to_string(DofClass c) {
  switch (c) {
    case DofClass::kExtraInterior: return "e_in";
    case DofClass::kExtraMembrane: return "e_gamma";
    case DofClass::kIntraInterior: return "i_in";
    case DofClass::kIntraMembrane: return "i_gamma";
  }
  return "?";
}

}  // namespace emi
