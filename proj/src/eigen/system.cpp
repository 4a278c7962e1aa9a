#include "gyro/eigen/system.hpp"

#include "gyro/error.hpp"
#include "gyro/ops3d/operators.hpp"

namespace gyro::eigen {

using namespace ops3d;

namespace {

constexpr cd I{0.0, 1.0};

void add_block(std::vector<Eigen::Triplet<cd>>& trip, int ro, int co, const SparseR& m, cd coeff) {
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseR::InnerIterator it(m, c); it; ++it)
      trip.emplace_back(ro + static_cast<int>(it.row()), co + c, coeff * it.value());
}

}  // namespace

const Segment& SystemAssembly::unknown(const std::string& name) const {
  for (const auto& s : unknowns)
    if (s.name == name) return s;
  throw Error(ErrorKind::assembly, "no unknown named " + name);
}

int tau_radial_count(const Geometry& g) { return g.boundary_radial_factor().degree() + g.height_sq_degree(); }

static SystemAssembly assemble_checked(const Geometry& g, int m, const SystemOptions& opt);

SystemAssembly assemble(const Geometry& g, int m, const SystemOptions& opt) {
  try {
    return assemble_checked(g, m, opt);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::closure && e.kind() != ErrorKind::truncation) throw;
    throw Error(ErrorKind::assembly, "truncation (" + std::to_string(opt.L_max) + ", " + std::to_string(opt.N_max) +
                                         ") too small for the conversion cascade: " + e.what());
  }
}

static SystemAssembly assemble_checked(const Geometry& g, int m, const SystemOptions& opt) {
  if (!(opt.ekman > 0)) throw Error(ErrorKind::range, "Ekman number must be positive");
  g.require_valid();
  SystemAssembly sys;
  sys.geometry = g;
  sys.m = m;
  sys.ekman = opt.ekman;
  sys.options = opt;
  BasisSpec v;
  v.geometry = g;
  v.m = m;
  v.alpha = 1.0;
  v.L_max = opt.L_max;
  v.N_max = opt.N_max;
  v.validate();
  sys.velocity = v;
  sys.recombined = adjoint_target(v);
  sys.pressure = v;
  const BasisSpec& u = sys.recombined;
  const int nv = v.truncation().size();
  const int nu = u.truncation().size();
  const int np = v.truncation().size();
  const int r = tau_radial_count(g);
  const auto pos = tau_positions(u.truncation(), r);
  const int nt = static_cast<int>(pos.size());
  if (nu - nv != nt)
    throw Error(ErrorKind::assembly, "tau count " + std::to_string(nt) + " does not close the system (" +
                                         std::to_string(nu - nv) + " needed)");
  sys.n_tau_per_equation = nt;

  const std::vector<int> spins = vector_spins();
  int off = 0;
  for (int sg : spins) {
    sys.unknowns.push_back({"V" + std::string(sg > 0 ? "+" : sg < 0 ? "-" : "0"), sg, off, nv});
    off += nv;
  }
  sys.unknowns.push_back({"P", 0, off, np});
  off += np;
  for (int sg : spins) {
    sys.unknowns.push_back({"tau" + std::string(sg > 0 ? "+" : sg < 0 ? "-" : "0"), sg, off, nt});
    off += nt;
  }
  sys.unknowns.push_back({"tau_div", 0, off, nt});
  off += nt;
  const int total = off;

  int eo = 0;
  for (int sg : spins) {
    sys.equations.push_back({"momentum" + std::string(sg > 0 ? "+" : sg < 0 ? "-" : "0"), sg, eo, nu});
    eo += nu;
  }
  sys.equations.push_back({"divergence", 0, eo, nu});
  eo += nu;
  if (eo != total) throw Error(ErrorKind::assembly, "system is not square");

  std::vector<Eigen::Triplet<cd>> lt, mt;
  const BasisSpec pr = sys.pressure;
  for (int i = 0; i < 3; ++i) {
    const int sg = spins[i];
    const BasisSpec vs = v.with_sigma(sg), us = u.with_sigma(sg);
    const BlockOperator recomb = conversion_adjoint(vs);
    const BlockOperator cascade = conversion(us.with_alpha(1.0)) * conversion(us);
    const int ro = sys.equations[i].offset, co = sys.unknowns[i].offset;
    const SparseR mass = (cascade * recomb).to_sparse();
    add_block(mt, ro, co, mass, 1.0);
    // -2 e_z x u: -2i on spin +, +2i on spin -, nothing on spin 0.
    if (sg != 0) add_block(lt, ro, co, mass, -2.0 * I * static_cast<double>(sg));
    if (opt.diffusion) add_block(lt, ro, co, (spin_laplacian(us) * recomb).to_sparse(), opt.ekman);
    const BlockOperator grad = fundamental(pr, sg).with_target(us.with_alpha(2.0));
    add_block(lt, ro, sys.unknowns[3].offset, grad.to_sparse(), -1.0);
    add_block(lt, ro, sys.unknowns[4 + i].offset, tau_projection(us.with_alpha(2.0), opt.tau, r), 1.0);

    // Divergence row: D^{-sigma} acting on spin sigma.
    const BlockOperator dv = fundamental(us, -sg) * recomb;
    add_block(lt, sys.equations[3].offset, co, dv.to_sparse(), 1.0);
  }
  // The double-conversion alternative only exists for the alpha 2 momentum rows.
  const TauFlavor div_tau = opt.tau == TauFlavor::double_conversion ? TauFlavor::conversion : opt.tau;
  add_block(lt, sys.equations[3].offset, sys.unknowns[7].offset, tau_projection(u.with_alpha(1.0), div_tau, r), 1.0);

  sys.L = SparseC(total, total);
  sys.L.setFromTriplets(lt.begin(), lt.end());
  sys.M = SparseC(total, total);
  sys.M.setFromTriplets(mt.begin(), mt.end());
  return sys;
}

}  // namespace gyro::eigen
