#include "ptsim/process_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace ptsim {

namespace {

using MapC = Eigen::Map<CMat>;
using MapCC = Eigen::Map<const CMat>;

// Half-step joint superoperators reorganized for the staged sandwich
// contraction. With B[d_out, d_in, alpha_out, alpha_in] (d = mode Liouville
// pair xi*M + eta, alpha = system Liouville pair nu*N + mu):
//   b1v[(w*s + a), (g*m + x)] = B[w, x, a, g]   (outgoing half)
//   b2v[(h*m + y), (x*s + b)] = B[x, y, h, b]   (incoming half)
void fill_half_views(const CMat& s_joint, std::size_t n_s, std::size_t m_dim,
                     CMat* b1v, CMat* b2v) {
  const std::size_t s = n_s * n_s, m = m_dim * m_dim, nm = n_s * m_dim;
  if (b1v) b1v->setZero(m * s, s * m);
  if (b2v) b2v->setZero(s * m, m * s);
  for (std::size_t nu = 0; nu < n_s; ++nu)
    for (std::size_t mu = 0; mu < n_s; ++mu)
      for (std::size_t xi = 0; xi < m_dim; ++xi)
        for (std::size_t eta = 0; eta < m_dim; ++eta) {
          const std::size_t row = (nu * m_dim + xi) * nm + (mu * m_dim + eta);
          const std::size_t a = nu * n_s + mu;
          const std::size_t d = xi * m_dim + eta;
          for (std::size_t nut = 0; nut < n_s; ++nut)
            for (std::size_t mut = 0; mut < n_s; ++mut)
              for (std::size_t xip = 0; xip < m_dim; ++xip)
                for (std::size_t etap = 0; etap < m_dim; ++etap) {
                  const std::size_t col =
                      (nut * m_dim + xip) * nm + (mut * m_dim + etap);
                  const std::size_t g = nut * n_s + mut;
                  const std::size_t dp = xip * m_dim + etap;
                  const Cplx v = s_joint(row, col);
                  if (b1v) (*b1v)(d * s + a, g * m + dp) = v;
                  if (b2v) (*b2v)(a * m + dp, d * s + g) = v;
                }
        }
}

// Mode-space superoperator lifted to the joint (system x mode) Liouville
// space (identity on the system indices).
CMat embed_mode_superop_joint(const CMat& ins, std::size_t n_s, std::size_t m_dim) {
  const std::size_t m = m_dim * m_dim, nm = n_s * m_dim;
  if (static_cast<std::size_t>(ins.rows()) != m ||
      static_cast<std::size_t>(ins.cols()) != m) {
    throw ArgumentError("insertion superoperator has wrong dimension");
  }
  CMat out = CMat::Zero(nm * nm, nm * nm);
  for (std::size_t nu = 0; nu < n_s; ++nu)
    for (std::size_t mu = 0; mu < n_s; ++mu)
      for (std::size_t xi = 0; xi < m_dim; ++xi)
        for (std::size_t eta = 0; eta < m_dim; ++eta)
          for (std::size_t xip = 0; xip < m_dim; ++xip)
            for (std::size_t etap = 0; etap < m_dim; ++etap)
              out((nu * m_dim + xi) * nm + (mu * m_dim + eta),
                  (nu * m_dim + xip) * nm + (mu * m_dim + etap)) =
                  ins(xi * m_dim + eta, xip * m_dim + etap);
  return out;
}

double update_discard(ProcessTensor& pt, const SVDResult& svd) {
  const double s1 = svd.singular_values.size() ? svd.singular_values(0) : 0.0;
  const double rel = (s1 > 0) ? svd.discarded_max / s1 : 0.0;
  pt.discarded_max = std::max(pt.discarded_max, rel);
  return rel;
}

void check_adjacent(const ProcessTensor& pt) {
  for (std::size_t l = 0; l + 1 < pt.q.size(); ++l) {
    if (pt.q[l].d_out != pt.q[l + 1].d_in)
      throw ArgumentError("process tensor has mismatched adjacent bonds");
  }
}

// Full-step superoperator of the mode at step l (midpoint sampling), with
// any scheduled insertion applied after it.
CMat mode_full_step(const ModeSpec& mode, std::size_t l, std::size_t n_s, double dt) {
  const double t_mid = (double(l) - 0.5) * dt;
  const CMat half = mode_half_propagator(mode, dt, t_mid).matrix;
  CMat full = half * half;
  const auto it = mode.insertions.find(l);
  if (it != mode.insertions.end())
    full = embed_mode_superop_joint(it->second, n_s, mode.mode_dim) * full;
  return full;
}

}  // namespace

ProcessTensor trivial_pt(std::size_t n, std::size_t sys_dim, double dt) {
  if (n < 1) throw ArgumentError("trivial_pt: need at least one step");
  if (sys_dim < 1) throw ArgumentError("trivial_pt: invalid system dimension");
  ProcessTensor pt;
  pt.n_steps = n;
  pt.sys_dim = sys_dim;
  pt.dt = dt;
  pt.q.assign(n, QTensor::identity(sys_dim * sys_dim));
  return compute_closures(std::move(pt));
}

ProcessTensor single_mode_pt(const ModeSpec& mode, std::size_t n, double dt) {
  if (n < 1) throw ArgumentError("single_mode_pt: need at least one step");
  const std::size_t n_s = mode.sys_dim, m_dim = mode.mode_dim;
  const std::size_t joint2 = (n_s * m_dim) * (n_s * m_dim);
  if (joint2 > 4096) {
    throw ResourceError("single_mode_pt: joint Liouville dimension " +
                        std::to_string(joint2) + " exceeds the 4096 cap");
  }
  const std::size_t s = n_s * n_s, m = m_dim * m_dim, nm = n_s * m_dim;

  ProcessTensor pt;
  pt.n_steps = n;
  pt.sys_dim = n_s;
  pt.dt = dt;
  pt.q.reserve(n);

  const CVec rho_vec = vec(mode.initial_state);
  CMat cached_full;  // full-step superoperator reused for uniform steps
  const bool uniform = !mode.time_dependent;

  for (std::size_t l = 1; l <= n; ++l) {
    const bool has_ins = mode.insertions.count(l) > 0;
    CMat full;
    if (uniform && !has_ins) {
      if (cached_full.size() == 0) cached_full = mode_full_step(mode, l, n_s, dt);
      full = cached_full;
    } else {
      full = mode_full_step(mode, l, n_s, dt);
    }

    const std::size_t din = (l == 1) ? 1 : m;
    const std::size_t dout = (l == n) ? 1 : m;
    QTensor q(dout, din, s);
    // A[d, d', a, g] = full(row(a,d), col(g,d')) with boundary folds.
    for (std::size_t nu = 0; nu < n_s; ++nu)
      for (std::size_t mu = 0; mu < n_s; ++mu)
        for (std::size_t xi = 0; xi < m_dim; ++xi)
          for (std::size_t eta = 0; eta < m_dim; ++eta) {
            if (l == n && xi != eta) continue;  // trace functional on d
            const std::size_t row = (nu * m_dim + xi) * nm + (mu * m_dim + eta);
            const std::size_t a = nu * n_s + mu;
            const std::size_t o = (l == n) ? 0 : xi * m_dim + eta;
            for (std::size_t nut = 0; nut < n_s; ++nut)
              for (std::size_t mut = 0; mut < n_s; ++mut)
                for (std::size_t xip = 0; xip < m_dim; ++xip)
                  for (std::size_t etap = 0; etap < m_dim; ++etap) {
                    const std::size_t col =
                        (nut * m_dim + xip) * nm + (mut * m_dim + etap);
                    const std::size_t g = nut * n_s + mut;
                    const std::size_t dp = xip * m_dim + etap;
                    const Cplx v = full(row, col);
                    if (l == 1) {
                      q.at(o, 0, a, g) += v * rho_vec(dp);
                    } else {
                      q.at(o, dp, a, g) += v;
                    }
                  }
          }
    pt.q.push_back(std::move(q));
  }
  return compute_closures(std::move(pt));
}

ProcessTensor combine_mode(ProcessTensor pt, const ModeSpec& mode, double epsilon) {
  if (pt.n_steps == 0) throw ArgumentError("combine_mode: empty process tensor");
  if (mode.sys_dim != pt.sys_dim)
    throw ArgumentError("combine_mode: mode system dimension " +
                        std::to_string(mode.sys_dim) + " != PT system dimension " +
                        std::to_string(pt.sys_dim));
  const std::size_t joint2 = (mode.sys_dim * mode.mode_dim) * (mode.sys_dim * mode.mode_dim);
  if (joint2 > 4096)
    throw ResourceError("combine_mode: joint Liouville dimension " +
                        std::to_string(joint2) + " exceeds the 4096 cap");

  const std::size_t n = pt.n_steps;
  const std::size_t n_s = pt.sys_dim;
  const std::size_t s = n_s * n_s;
  const std::size_t m_dim = mode.mode_dim;
  const std::size_t m = m_dim * m_dim;
  const bool uniform = !mode.time_dependent;

  pt.last_sweep_discarded.clear();
  pt.closures_valid = false;
  pt.closures.clear();

  CMat b1v_cache, b2v_cache;
  bool have_cache = false;

  // Fused forward pass: per site, contract the sandwich B1 * Qold * B2 with
  // the running carry over the composite in-bond, then split with a
  // truncated SVD (except at the last site, which absorbs the carry).
  //
  // carry[(q*m + y), k]: q = old bond, y = new mode Liouville index. At site
  // 1 the mode's initial state is the carry (d_0 stays 1).
  CMat carry(m, 1);
  {
    const CVec r0 = vec(mode.initial_state);
    for (std::size_t y = 0; y < m; ++y) carry(y, 0) = r0(y);
  }

  for (std::size_t l = 1; l <= n; ++l) {
    const QTensor& old = pt.q[l - 1];
    const std::size_t d_old_out = old.d_out, d_old_in = old.d_in;
    const std::size_t kin = static_cast<std::size_t>(carry.cols());
    const bool has_ins = mode.insertions.count(l) > 0;

    if (l < n && d_old_out * m > pt.bond_cap)
      throw ResourceError("combine_mode: pre-compression bond " +
                          std::to_string(d_old_out * m) + " exceeds cap " +
                          std::to_string(pt.bond_cap));

    // Half-step tensors for this step.
    const CMat* b1v = nullptr;
    const CMat* b2v = nullptr;
    CMat b1v_local, b2v_local;
    if (uniform) {
      if (!have_cache) {
        const CMat half = mode_half_propagator(mode, pt.dt, (double(l) - 0.5) * pt.dt).matrix;
        fill_half_views(half, n_s, m_dim, &b1v_cache, &b2v_cache);
        have_cache = true;
      }
      b1v = &b1v_cache;
      b2v = &b2v_cache;
      if (has_ins) {
        const CMat half = mode_half_propagator(mode, pt.dt, (double(l) - 0.5) * pt.dt).matrix;
        const CMat dressed =
            embed_mode_superop_joint(mode.insertions.at(l), n_s, m_dim) * half;
        fill_half_views(dressed, n_s, m_dim, &b1v_local, nullptr);
        b1v = &b1v_local;
      }
    } else {
      const CMat half = mode_half_propagator(mode, pt.dt, (double(l) - 0.5) * pt.dt).matrix;
      if (has_ins) {
        const CMat dressed =
            embed_mode_superop_joint(mode.insertions.at(l), n_s, m_dim) * half;
        fill_half_views(dressed, n_s, m_dim, &b1v_local, nullptr);
        fill_half_views(half, n_s, m_dim, nullptr, &b2v_local);
      } else {
        fill_half_views(half, n_s, m_dim, &b1v_local, &b2v_local);
      }
      b1v = &b1v_local;
      b2v = &b2v_local;
    }

    // At the last site the outgoing mode leg is closed with the trace
    // functional J[w] = delta_{xi eta}: collapse b1v's w blocks.
    CMat b1_used;
    std::size_t w_dim = m;
    if (l == n) {
      b1_used = CMat::Zero(s, s * m);
      for (std::size_t xi = 0; xi < m_dim; ++xi) {
        const std::size_t w = xi * m_dim + xi;
        b1_used += b1v->block(w * s, 0, s, s * m);
      }
      b1v = &b1_used;
      w_dim = 1;
    }

    // Staged contraction, one carry column k at a time.
    const MapCC old_view(old.m.data(), d_old_out * s * s, d_old_in);
    CMat big(d_old_out * w_dim, s * s * kin);
    CMat ck(d_old_in, m), qc, qbt(s * m, d_old_out * s), t_k;
    for (std::size_t k = 0; k < kin; ++k) {
      for (std::size_t qb = 0; qb < d_old_in; ++qb)
        for (std::size_t y = 0; y < m; ++y) ck(qb, y) = carry(qb * m + y, k);
      qc.noalias() = old_view * ck;  // rows (p,g,h), cols y
      const MapCC qc_view(qc.data(), d_old_out * s, s * m);  // rows (p,g), cols (h,y)
      CMat qb_mat = qc_view * (*b2v);                        // rows (p,g), cols (x,b)
      // permute to rows (g,x), cols (p,b)
      for (std::size_t p = 0; p < d_old_out; ++p)
        for (std::size_t g = 0; g < s; ++g)
          for (std::size_t x = 0; x < m; ++x)
            for (std::size_t b = 0; b < s; ++b)
              qbt(g * m + x, p * s + b) = qb_mat(p * s + g, x * s + b);
      t_k.noalias() = (*b1v) * qbt;  // rows (w,a), cols (p,b)
      for (std::size_t w = 0; w < w_dim; ++w)
        for (std::size_t a = 0; a < s; ++a)
          for (std::size_t p = 0; p < d_old_out; ++p)
            for (std::size_t b = 0; b < s; ++b)
              big(p * w_dim + w, (a * s + b) * kin + k) =
                  t_k(w * s + a, p * s + b);
    }

    if (l == n) {
      QTensor site(1, kin, s);
      site.m = big;
      pt.q[l - 1] = std::move(site);
      break;
    }
    SVDResult svd = truncated_svd(big, epsilon);
    pt.last_sweep_discarded.push_back(update_discard(pt, svd));
    QTensor site(svd.k_eff, kin, s);
    site.m = svd.v_dag;
    pt.q[l - 1] = std::move(site);
    carry = svd.u * svd.singular_values.asDiagonal();
  }

  check_adjacent(pt);
  pt = sweep_compress(std::move(pt), epsilon, SweepDirection::Backward);
  return pt;
}

ProcessTensor sweep_compress(ProcessTensor pt, double epsilon, SweepDirection direction) {
  if (pt.n_steps == 0) throw ArgumentError("sweep_compress: empty process tensor");
  const std::size_t n = pt.n_steps;
  const std::size_t s = pt.s2();
  pt.closures_valid = false;
  pt.closures.clear();
  pt.last_sweep_discarded.assign(n > 1 ? n - 1 : 0, 0.0);

  if (direction == SweepDirection::Forward) {
    CMat carry = CMat::Identity(pt.q[0].d_in, pt.q[0].d_in);
    for (std::size_t l = 1; l <= n; ++l) {
      QTensor& site = pt.q[l - 1];
      const std::size_t k_new = static_cast<std::size_t>(carry.cols());
      const MapCC right_view(site.m.data(), site.d_out * s * s, site.d_in);
      CMat absorbed = right_view * carry;  // rows (o,a,at), cols k
      if (l == n) {
        QTensor fresh(site.d_out, k_new, s);
        std::memcpy(fresh.m.data(), absorbed.data(),
                    sizeof(Cplx) * absorbed.size());
        site = std::move(fresh);
        break;
      }
      const MapCC mat(absorbed.data(), site.d_out, s * s * k_new);
      SVDResult svd = truncated_svd(mat, epsilon);
      pt.last_sweep_discarded[l - 1] =
          std::max(pt.last_sweep_discarded[l - 1], update_discard(pt, svd));
      QTensor fresh(svd.k_eff, k_new, s);
      fresh.m = svd.v_dag;
      site = std::move(fresh);
      carry = svd.u * svd.singular_values.asDiagonal();
    }
  } else {
    CMat carry = CMat::Identity(pt.q[n - 1].d_out, pt.q[n - 1].d_out);
    for (std::size_t l = n; l >= 1; --l) {
      QTensor& site = pt.q[l - 1];
      const std::size_t k_new = static_cast<std::size_t>(carry.rows());
      CMat absorbed = carry * site.m;  // rows o', cols (a,at,i)
      if (l == 1) {
        QTensor fresh(k_new, site.d_in, s);
        fresh.m = absorbed;
        site = std::move(fresh);
        break;
      }
      const MapCC mat(absorbed.data(), k_new * s * s, site.d_in);
      SVDResult svd = truncated_svd(mat, epsilon);
      pt.last_sweep_discarded[l - 2] =
          std::max(pt.last_sweep_discarded[l - 2], update_discard(pt, svd));
      QTensor fresh(k_new, svd.k_eff, s);
      std::memcpy(fresh.m.data(), svd.u.data(), sizeof(Cplx) * svd.u.size());
      site = std::move(fresh);
      carry = svd.singular_values.asDiagonal() * svd.v_dag;
    }
  }
  check_adjacent(pt);
  return compute_closures(std::move(pt));
}

ProcessTensor compute_closures(ProcessTensor pt) {
  const std::size_t n = pt.n_steps, n_s = pt.sys_dim;
  pt.closures.assign(n + 1, CVec());
  pt.closures[n] = CVec::Ones(pt.q[n - 1].d_out);
  for (std::size_t l = n; l >= 1; --l) {
    const QTensor& site = pt.q[l - 1];
    const CVec& up = pt.closures[l];
    CVec down = CVec::Zero(site.d_in);
    for (std::size_t o = 0; o < site.d_out; ++o) {
      if (up(o) == Cplx(0.0, 0.0)) continue;
      for (std::size_t nu = 0; nu < n_s; ++nu) {
        const std::size_t a = nu * n_s + nu;
        for (std::size_t i = 0; i < site.d_in; ++i)
          down(i) += up(o) * site.at(o, i, a, 0);
      }
    }
    pt.closures[l - 1] = std::move(down);
  }
  pt.closures_valid = true;
  return pt;
}

ProcessTensor merge_pt(const ProcessTensor& a, const ProcessTensor& b, double epsilon,
                       bool final_sweep) {
  if (a.n_steps != b.n_steps || a.sys_dim != b.sys_dim)
    throw ArgumentError("merge_pt: incompatible process tensors");
  if (std::abs(a.dt - b.dt) > 1e-15 * std::max(1.0, std::abs(a.dt)))
    throw ArgumentError("merge_pt: time steps differ");
  const std::size_t n = a.n_steps, s = a.s2();

  ProcessTensor out;
  out.n_steps = n;
  out.sys_dim = a.sys_dim;
  out.dt = a.dt;
  out.bond_cap = std::min(a.bond_cap, b.bond_cap);
  out.discarded_max = std::max(a.discarded_max, b.discarded_max);
  out.q.reserve(n);

  for (std::size_t l = 1; l <= n; ++l) {
    const QTensor& qa = a.q[l - 1];
    const QTensor& qb = b.q[l - 1];
    if (qa.d_out * qb.d_out > out.bond_cap && l < n)
      throw ResourceError("merge_pt: merged bond " +
                          std::to_string(qa.d_out * qb.d_out) + " exceeds cap " +
                          std::to_string(out.bond_cap));
    QTensor q(qa.d_out * qb.d_out, qa.d_in * qb.d_in, s);
    // q[(pa,pb),(qa,qb), x, y] = sum_g qa[pa,qa,x,g] qb[pb,qb,g,y]
    for (std::size_t x = 0; x < s; ++x)
      for (std::size_t y = 0; y < s; ++y)
        for (std::size_t g = 0; g < s; ++g)
          for (std::size_t pa = 0; pa < qa.d_out; ++pa)
            for (std::size_t ia = 0; ia < qa.d_in; ++ia) {
              const Cplx va = qa.at(pa, ia, x, g);
              if (va == Cplx(0.0, 0.0)) continue;
              for (std::size_t pb = 0; pb < qb.d_out; ++pb)
                for (std::size_t ib = 0; ib < qb.d_in; ++ib)
                  q.at(pa * qb.d_out + pb, ia * qb.d_in + ib, x, y) +=
                      va * qb.at(pb, ib, g, y);
            }
    out.q.push_back(std::move(q));
  }
  if (final_sweep) {
    out = sweep_compress(std::move(out), epsilon, SweepDirection::Forward);
    out = sweep_compress(std::move(out), epsilon, SweepDirection::Backward);
    return out;
  }
  return compute_closures(std::move(out));
}

std::vector<CMat> contract(const ProcessTensor& pt, const std::vector<Superoperator>& m_list,
                           const CMat& rho0) {
  const std::size_t n = pt.n_steps, s = pt.s2();
  if (m_list.size() != n)
    throw ArgumentError("contract: need " + std::to_string(n) +
                        " propagators, got " + std::to_string(m_list.size()));
  if (!pt.closures_valid)
    throw ArgumentError("contract: closures not computed");
  if (static_cast<std::size_t>(rho0.rows()) != pt.sys_dim ||
      static_cast<std::size_t>(rho0.cols()) != pt.sys_dim)
    throw ArgumentError("contract: initial state dimension mismatch");

  std::vector<CMat> out;
  out.reserve(n + 1);

  CMat r(s, 1);
  {
    const CVec v = vec(rho0);
    for (std::size_t a = 0; a < s; ++a) r(a, 0) = v(a);
  }
  out.push_back(unvec(CVec(r * pt.closures[0])));

  for (std::size_t l = 1; l <= n; ++l) {
    const Superoperator& ml = m_list[l - 1];
    if (ml.dim != s) throw ArgumentError("contract: propagator dimension mismatch");
    const QTensor& site = pt.q[l - 1];
    if (static_cast<std::size_t>(r.cols()) != site.d_in)
      throw ArgumentError("contract: bond mismatch at step " + std::to_string(l));
    CMat p = ml.matrix * r;  // s x d_in
    const Eigen::Map<const CVec> pv(p.data(), p.size());
    CMat rn(site.d_out, s);
    for (std::size_t a = 0; a < s; ++a) {
      const Eigen::Map<const CMat, 0, Eigen::OuterStride<>> slice(
          site.m.data() + a * s * site.d_in, site.d_out, s * site.d_in,
          Eigen::OuterStride<>(s * s * site.d_in));
      rn.col(a).noalias() = slice * pv;
    }
    r = rn.transpose();
    out.push_back(unvec(CVec(r * pt.closures[l])));
  }
  return out;
}

std::vector<std::size_t> bond_profile(const ProcessTensor& pt) {
  std::vector<std::size_t> d;
  d.reserve(pt.n_steps + 1);
  d.push_back(pt.q.empty() ? 1 : pt.q.front().d_in);
  for (const auto& q : pt.q) d.push_back(q.d_out);
  return d;
}

namespace {
constexpr char kMagic[4] = {'P', 'T', 'S', 'N'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_pt(const ProcessTensor& pt, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("save_pt: cannot open " + path);
  f.write(kMagic, 4);
  auto w64 = [&f](std::uint64_t v) { f.write(reinterpret_cast<const char*>(&v), 8); };
  f.write(reinterpret_cast<const char*>(&kVersion), 4);
  w64(pt.n_steps);
  w64(pt.sys_dim);
  f.write(reinterpret_cast<const char*>(&pt.dt), 8);
  for (std::size_t dl : bond_profile(pt)) w64(dl);
  for (const auto& q : pt.q)
    f.write(reinterpret_cast<const char*>(q.m.data()), sizeof(Cplx) * q.m.size());
  if (!f) throw ArgumentError("save_pt: write failed for " + path);
}

ProcessTensor load_pt(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("load_pt: cannot open " + path);
  char magic[4];
  std::uint32_t version = 0;
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(&version), 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw ConfigError("load_pt: not a process-tensor snapshot: " + path);
  if (version != kVersion)
    throw ConfigError("load_pt: unsupported snapshot version " + std::to_string(version));
  auto r64 = [&f]() {
    std::uint64_t v = 0;
    f.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  ProcessTensor pt;
  pt.n_steps = r64();
  pt.sys_dim = r64();
  f.read(reinterpret_cast<char*>(&pt.dt), 8);
  if (!f || pt.n_steps == 0 || pt.sys_dim == 0)
    throw ConfigError("load_pt: corrupt snapshot header in " + path);
  std::vector<std::size_t> bonds(pt.n_steps + 1);
  for (auto& b : bonds) b = r64();
  if (bonds.front() != 1 || bonds.back() != 1)
    throw ConfigError("load_pt: snapshot boundary bonds must be 1");
  const std::size_t s = pt.sys_dim * pt.sys_dim;
  pt.q.reserve(pt.n_steps);
  for (std::size_t l = 1; l <= pt.n_steps; ++l) {
    QTensor q(bonds[l], bonds[l - 1], s);
    f.read(reinterpret_cast<char*>(q.m.data()), sizeof(Cplx) * q.m.size());
    pt.q.push_back(std::move(q));
  }
  if (!f) throw ConfigError("load_pt: truncated snapshot payload in " + path);
  return compute_closures(std::move(pt));
}

}  // namespace ptsim
