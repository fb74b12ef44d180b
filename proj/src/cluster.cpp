#include "pwlnet/cluster.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace pwlnet {

namespace {

Mat laplacian_of(const Mat& w) {
  Mat L = -w;
  for (Eigen::Index i = 0; i < w.rows(); ++i) L(i, i) += w.row(i).sum();
  return L;
}

// Sorted multiset signature of a Laplacian row (diagonal kept separate).
std::pair<double, std::vector<double>> row_signature(const Mat& L, int i) {
  std::vector<double> off;
  for (Eigen::Index j = 0; j < L.cols(); ++j) {
    if (j != i) off.push_back(L(i, j));
  }
  std::sort(off.begin(), off.end());
  return {L(i, i), off};
}

bool signature_close(const std::pair<double, std::vector<double>>& a,
                     const std::pair<double, std::vector<double>>& b) {
  if (std::abs(a.first - b.first) > 1e-9) return false;
  for (size_t k = 0; k < a.second.size(); ++k) {
    if (std::abs(a.second[k] - b.second[k]) > 1e-9) return false;
  }
  return true;
}

std::vector<std::vector<int>> canonical_blocks(
    std::vector<std::vector<int>> blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

}  // namespace

std::vector<std::vector<int>> automorphisms(const Mat& w) {
  const int N = static_cast<int>(w.rows());
  if (N > 10) {
    throw ValidationError(
        "automorphisms: brute-force search is capped at N = 10; supply "
        "partitions directly for larger graphs");
  }
  const Mat L = laplacian_of(w);
  std::vector<std::pair<double, std::vector<double>>> sig;
  for (int i = 0; i < N; ++i) sig.push_back(row_signature(L, i));

  std::vector<std::vector<int>> found;
  std::vector<int> perm(static_cast<size_t>(N), -1);
  std::vector<bool> used(static_cast<size_t>(N), false);

  std::function<void(int)> place = [&](int i) {
    if (i == N) {
      found.push_back(perm);
      return;
    }
    for (int target = 0; target < N; ++target) {
      if (used[static_cast<size_t>(target)]) continue;
      if (!signature_close(sig[static_cast<size_t>(i)],
                           sig[static_cast<size_t>(target)])) {
        continue;
      }
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) {
        const int tj = perm[static_cast<size_t>(j)];
        if (std::abs(L(target, tj) - L(i, j)) > 1e-9 ||
            std::abs(L(tj, target) - L(j, i)) > 1e-9) {
          ok = false;
        }
      }
      if (std::abs(L(target, target) - L(i, i)) > 1e-9) ok = false;
      if (!ok) continue;
      perm[static_cast<size_t>(i)] = target;
      used[static_cast<size_t>(target)] = true;
      place(i + 1);
      used[static_cast<size_t>(target)] = false;
      perm[static_cast<size_t>(i)] = -1;
      if (found.size() > 200000) {
        throw ValidationError(
            "automorphisms: symmetry group too large to enumerate");
      }
    }
  };
  place(0);
  return found;
}

bool partition_dynamically_valid(const Mat& L, const ClusterPartition& part,
                                 double tol) {
  for (const auto& block : part.blocks) {
    for (const auto& other : part.blocks) {
      double ref = 0;
      bool first = true;
      for (int u : block) {
        double sum = 0;
        for (int j : other) sum += L(u, j);
        if (first) {
          ref = sum;
          first = false;
        } else if (std::abs(sum - ref) > tol) {
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<ClusterPartition> enumerate_cluster_states(const Mat& w) {
  const int N = static_cast<int>(w.rows());
  const Mat L = laplacian_of(w);
  auto gens_all = automorphisms(w);
  // Drop the identity; cap the generator pool to keep subset counts sane.
  std::vector<std::vector<int>> pool;
  for (const auto& g : gens_all) {
    bool ident = true;
    for (int i = 0; i < N; ++i) ident = ident && g[static_cast<size_t>(i)] == i;
    if (!ident) pool.push_back(g);
    if (pool.size() >= 60) break;
  }

  std::set<std::vector<std::vector<int>>> seen;
  std::vector<ClusterPartition> out;

  auto add_partition = [&](std::vector<std::vector<int>> blocks,
                           const std::string& provenance,
                           std::vector<std::vector<int>> gens) {
    auto canon = canonical_blocks(std::move(blocks));
    if (seen.count(canon)) return false;
    seen.insert(canon);
    out.push_back({canon, provenance, std::move(gens)});
    return true;
  };

  // Orbit partition of the subgroup generated by a set: connected
  // components of i ~ g(i).
  auto orbit_partition = [&](const std::vector<const std::vector<int>*>& gens) {
    std::vector<int> comp(static_cast<size_t>(N), -1);
    int nc = 0;
    for (int i = 0; i < N; ++i) {
      if (comp[static_cast<size_t>(i)] >= 0) continue;
      std::vector<int> stack{i};
      comp[static_cast<size_t>(i)] = nc;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (const auto* g : gens) {
          const int v = (*g)[static_cast<size_t>(u)];
          if (comp[static_cast<size_t>(v)] < 0) {
            comp[static_cast<size_t>(v)] = nc;
            stack.push_back(v);
          }
        }
      }
      ++nc;
    }
    std::vector<std::vector<int>> blocks(static_cast<size_t>(nc));
    for (int i = 0; i < N; ++i) {
      blocks[static_cast<size_t>(comp[static_cast<size_t>(i)])].push_back(i);
    }
    return blocks;
  };

  // Singletons (empty subgroup) and subsets of up to 3 generators.
  add_partition(orbit_partition({}), "symmetry", {});
  const int P = static_cast<int>(pool.size());
  long subsets = 0;
  for (int a = 0; a < P; ++a) {
    add_partition(orbit_partition({&pool[static_cast<size_t>(a)]}), "symmetry",
                  {pool[static_cast<size_t>(a)]});
    for (int b = a + 1; b < P; ++b) {
      for (int c = b; c < P; ++c) {
        if (++subsets > 50000) break;
        std::vector<const std::vector<int>*> gens{
            &pool[static_cast<size_t>(a)], &pool[static_cast<size_t>(b)]};
        std::vector<std::vector<int>> glist{pool[static_cast<size_t>(a)],
                                            pool[static_cast<size_t>(b)]};
        if (c != b) {
          gens.push_back(&pool[static_cast<size_t>(c)]);
          glist.push_back(pool[static_cast<size_t>(c)]);
        }
        add_partition(orbit_partition(gens), "symmetry", std::move(glist));
      }
    }
  }

  // Laplacian merges: closure over single valid merges of known states.
  for (size_t scan = 0; scan < out.size(); ++scan) {
    const auto blocks = out[scan].blocks;
    const int M = static_cast<int>(blocks.size());
    for (int a = 0; a < M; ++a) {
      for (int b = a + 1; b < M; ++b) {
        std::vector<std::vector<int>> merged;
        std::vector<int> join = blocks[static_cast<size_t>(a)];
        join.insert(join.end(), blocks[static_cast<size_t>(b)].begin(),
                    blocks[static_cast<size_t>(b)].end());
        merged.push_back(join);
        for (int k = 0; k < M; ++k) {
          if (k != a && k != b) merged.push_back(blocks[static_cast<size_t>(k)]);
        }
        ClusterPartition cand{canonical_blocks(merged), "laplacian-merge", {}};
        if (!partition_dynamically_valid(L, cand)) continue;
        add_partition(cand.blocks, "laplacian-merge", {});
      }
    }
    if (out.size() > 5000) break;
  }

  std::sort(out.begin(), out.end(),
            [](const ClusterPartition& x, const ClusterPartition& y) {
              return x.num_blocks() < y.num_blocks();
            });
  return out;
}

Mat quotient_laplacian(const Mat& L, const ClusterPartition& part) {
  if (!partition_dynamically_valid(L, part)) {
    throw ValidationError("quotient_laplacian: partition is not dynamically valid");
  }
  const int M = part.num_blocks();
  Mat LQ(M, M);
  for (int k = 0; k < M; ++k) {
    const int rep = part.blocks[static_cast<size_t>(k)].front();
    for (int l = 0; l < M; ++l) {
      double sum = 0;
      for (int j : part.blocks[static_cast<size_t>(l)]) sum += L(rep, j);
      LQ(k, l) = sum;
    }
  }
  return LQ;
}

PwlSystem quotient_system(const PwlSystem& sys, const Mat& LQ, double sigma,
                          const Mat& J) {
  const int M = static_cast<int>(LQ.rows());
  const int m = sys.dimension;
  const int P = sys.num_zones();
  const int K = sys.num_manifolds();
  PwlSystem q;
  q.dimension = M * m;
  q.smoothness = sys.smoothness;
  q.name = sys.name + "+quotient";
  q.params = sys.params;
  q.params["sigma"] = sigma;

  // Zones: all per-cluster zone tuples, id = sum_k mu_k P^k.
  const int n_zones = static_cast<int>(std::pow(P, M) + 0.5);
  for (int id = 0; id < n_zones; ++id) {
    ZoneDynamics z;
    z.A = Mat::Zero(M * m, M * m);
    z.b = Vec::Zero(M * m);
    int code = id;
    std::string name;
    z.signs.assign(static_cast<size_t>(M * K), 0);
    for (int k = 0; k < M; ++k) {
      const int mu = code % P;
      code /= P;
      z.A.block(k * m, k * m, m, m) = sys.zones[static_cast<size_t>(mu)].A;
      z.b.segment(k * m, m) = sys.zones[static_cast<size_t>(mu)].b;
      name += (k ? "," : "(") + sys.zones[static_cast<size_t>(mu)].name;
      // Per-cluster sign requirements against that cluster's manifolds.
      for (int kk = 0; kk < K; ++kk) {
        z.signs[static_cast<size_t>(k * K + kk)] =
            sys.zones[static_cast<size_t>(mu)].signs.empty()
                ? 0
                : sys.zones[static_cast<size_t>(mu)].signs[static_cast<size_t>(kk)];
      }
    }
    z.name = name + ")";
    for (int r = 0; r < M; ++r) {
      for (int c = 0; c < M; ++c) {
        z.A.block(r * m, c * m, m, m) -= sigma * LQ(r, c) * J;
      }
    }
    q.zones.push_back(std::move(z));
  }

  // Manifolds: one copy of each base manifold per cluster; targets resolve
  // by sign-flip in the tuple encoding, so plain crossings need no explicit
  // targets. Jumps act on the owning cluster's block.
  for (int k = 0; k < M; ++k) {
    for (int kk = 0; kk < K; ++kk) {
      const auto& base = sys.manifolds[static_cast<size_t>(kk)];
      Manifold mf;
      mf.normal = Vec::Zero(M * m);
      mf.normal.segment(k * m, m) = base.normal;
      mf.offset = base.offset;
      mf.detector = base.detector;
      mf.fires = base.fires;
      mf.name = base.name + "@c" + std::to_string(k);
      if (!base.jump.is_identity()) {
        mf.jump.M = Mat::Identity(M * m, M * m);
        mf.jump.M.block(k * m, k * m, m, m) = base.jump.M;
        mf.jump.q = Vec::Zero(M * m);
        mf.jump.q.segment(k * m, m) = base.jump.q;
        // Jump targets must be explicit; derive from the base targets by
        // substituting the cluster's digit.
        // (resolved at event time by event_target of the base system)
      } else {
        mf.jump = JumpRule::identity(M * m);
      }
      q.manifolds.push_back(std::move(mf));
    }
  }
  q.validate();
  return q;
}

PeriodicOrbit cluster_orbit(std::shared_ptr<const PwlSystem> sys, const Mat& L,
                            const ClusterPartition& part, double sigma,
                            const Mat& J, const OrbitTemplate& quotient_tmpl,
                            const std::vector<double>& times_guess,
                            const Vec& state_guess) {
  const Mat LQ = quotient_laplacian(L, part);
  auto qsys = std::make_shared<PwlSystem>(quotient_system(*sys, LQ, sigma, J));
  return find_periodic_orbit(std::move(qsys), quotient_tmpl, times_guess,
                             state_guess);
}

ClusterFloquet cluster_floquet(const PwlSystem& sys, const Mat& L,
                               const ClusterPartition& part,
                               const PeriodicOrbit& quotient_orbit,
                               double sigma, const Mat& J, const Mat& Q) {
  const int N = static_cast<int>(L.rows());
  const int M = part.num_blocks();
  const int m = sys.dimension;
  const int P = sys.num_zones();
  const int K = sys.num_manifolds();
  if (Q.rows() != N || Q.cols() != N) {
    throw DimensionError("cluster_floquet: Q must be N x N");
  }
  if ((Q * Q.transpose() - Mat::Identity(N, N)).lpNorm<Eigen::Infinity>() >
      1e-10) {
    throw ValidationError("cluster_floquet: Q is not orthogonal");
  }
  const Mat Lp = Q * L * Q.transpose();

  // J^(k) = Q E^(k) Q^T and the row-coupling graph.
  std::vector<Mat> Jk(static_cast<size_t>(M));
  for (int k = 0; k < M; ++k) {
    Mat E = Mat::Zero(N, N);
    for (int i : part.blocks[static_cast<size_t>(k)]) E(i, i) = 1.0;
    Jk[static_cast<size_t>(k)] = Q * E * Q.transpose();
  }
  std::vector<std::vector<int>> components;
  {
    std::vector<int> comp(static_cast<size_t>(N), -1);
    int nc = 0;
    auto coupled = [&](int r, int s) {
      if (std::abs(Lp(r, s)) > 1e-9 || std::abs(Lp(s, r)) > 1e-9) return true;
      for (const auto& jk : Jk) {
        if (std::abs(jk(r, s)) > 1e-9 || std::abs(jk(s, r)) > 1e-9) return true;
      }
      return false;
    };
    for (int i = 0; i < N; ++i) {
      if (comp[static_cast<size_t>(i)] >= 0) continue;
      std::vector<int> stack{i};
      comp[static_cast<size_t>(i)] = nc;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < N; ++v) {
          if (comp[static_cast<size_t>(v)] < 0 && coupled(u, v)) {
            comp[static_cast<size_t>(v)] = nc;
            stack.push_back(v);
          }
        }
      }
      ++nc;
    }
    components.resize(static_cast<size_t>(nc));
    for (int i = 0; i < N; ++i) {
      components[static_cast<size_t>(comp[static_cast<size_t>(i)])].push_back(i);
    }
  }

  // Per-cluster saltation at each quotient event.
  auto cluster_saltation = [&](int event_index, int cluster) {
    const auto& ev = quotient_orbit.events[static_cast<size_t>(event_index)];
    const int base_manifold = ev.manifold % K;
    const auto& mf = sys.manifolds[static_cast<size_t>(base_manifold)];
    const Vec vpre = ev.pre_velocity.segment(cluster * m, m);
    const Vec vpost = ev.post_velocity.segment(cluster * m, m);
    const double speed = mf.normal.dot(vpre);
    if (std::abs(speed) < 1e-8) {
      throw GrazingError("cluster_floquet: grazing cluster event");
    }
    const Mat dj =
        mf.jump.is_identity() ? Mat::Identity(m, m) : mf.jump.M;
    return Mat(dj + (vpost - dj * vpre) * mf.normal.transpose() / speed);
  };

  ClusterFloquet out;
  out.stable = true;
  for (const auto& rows : components) {
    const int R = static_cast<int>(rows.size());
    const bool is_sync = rows.front() < M;
    MatC psi = MatC::Identity(R * m, R * m);
    for (int i = 0; i < quotient_orbit.num_segments(); ++i) {
      const auto& seg = quotient_orbit.segments[static_cast<size_t>(i)];
      // Decode the per-cluster zone tuple of this segment.
      std::vector<int> mu(static_cast<size_t>(M));
      int code = seg.zone;
      for (int k = 0; k < M; ++k) {
        mu[static_cast<size_t>(k)] = code % P;
        code /= P;
      }
      Mat gen = Mat::Zero(R * m, R * m);
      for (int k = 0; k < M; ++k) {
        const Mat& A = sys.zones[static_cast<size_t>(mu[static_cast<size_t>(k)])].A;
        const Mat LJk = Lp * Jk[static_cast<size_t>(k)];
        for (int r = 0; r < R; ++r) {
          for (int c = 0; c < R; ++c) {
            gen.block(r * m, c * m, m, m) +=
                Jk[static_cast<size_t>(k)](rows[static_cast<size_t>(r)],
                                           rows[static_cast<size_t>(c)]) *
                    A -
                sigma *
                    LJk(rows[static_cast<size_t>(r)],
                        rows[static_cast<size_t>(c)]) *
                    J;
          }
        }
      }
      psi = expm(MatC(gen.cast<Complex>()), seg.time_of_flight) * psi;
      // Event: saltation of the crossing cluster, inflated to the component.
      const int cluster =
          quotient_orbit.events[static_cast<size_t>(i)].manifold / K;
      const Mat Sc = cluster_saltation(i, cluster);
      Mat shat = Mat::Identity(R * m, R * m);
      for (int r = 0; r < R; ++r) {
        for (int c = 0; c < R; ++c) {
          shat.block(r * m, c * m, m, m) +=
              Jk[static_cast<size_t>(cluster)](rows[static_cast<size_t>(r)],
                                               rows[static_cast<size_t>(c)]) *
              (Sc - Mat::Identity(m, m));
        }
      }
      psi = shat.cast<Complex>() * psi;
    }
    for (const auto& p : eig(psi)) {
      if (is_sync) {
        out.sync_multipliers.push_back(p.value);
      } else {
        out.transverse_multipliers.push_back(p.value);
        out.max_transverse_modulus =
            std::max(out.max_transverse_modulus, std::abs(p.value));
        if (std::abs(p.value) >= 1.0) out.stable = false;
      }
    }
  }
  // The synchronization block carries the trivial multiplier.
  double best = 1e300;
  for (const auto& mu : out.sync_multipliers) {
    best = std::min(best, std::abs(mu - Complex(1, 0)));
  }
  if (best > 1e-6) {
    throw NumericError("cluster_floquet: synchronization block lost the "
                       "trivial multiplier");
  }
  // Nontrivial sync-block multipliers also gate stability.
  int trivial = -1;
  double dist = 1e300;
  for (size_t k = 0; k < out.sync_multipliers.size(); ++k) {
    const double d = std::abs(out.sync_multipliers[k] - Complex(1, 0));
    if (d < dist) {
      dist = d;
      trivial = static_cast<int>(k);
    }
  }
  for (size_t k = 0; k < out.sync_multipliers.size(); ++k) {
    if (static_cast<int>(k) == trivial) continue;
    if (std::abs(out.sync_multipliers[k]) >= 1.0) out.stable = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Five-node reference example
// ---------------------------------------------------------------------------

Mat five_node_demo_laplacian() {
  Mat L(5, 5);
  L << 3, -1, 0, -1, -1,
      -1, 3, -1, 0, -1,
       0, -1, 3, -1, -1,
      -1, 0, -1, 3, -1,
      -1, -1, -1, -1, 4;
  return L;
}

Mat five_node_demo_q() {
  Mat Q = Mat::Zero(5, 5);
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  Q.row(0) << 0, 1 / s2, 0, 1 / s2, 0;           // cluster {2,4} coordinate
  Q.row(1) << 1 / s3, 0, 1 / s3, 0, 1 / s3;      // cluster {1,3,5} coordinate
  Q.row(2) << 1 / s6, 0, 1 / s6, 0, -2 / s6;     // transverse, eigenvalue 5
  Q.row(3) << 1 / s2, 0, -1 / s2, 0, 0;          // transverse, eigenvalue 3
  Q.row(4) << 0, 1 / s2, 0, -1 / s2, 0;          // transverse, eigenvalue 3
  return Q;
}

ClusterPartition five_node_demo_partition() {
  return {{{0, 2, 4}, {1, 3}}, "laplacian-merge", {}};
}

ClusterPreset five_node_demo_preset(double sigma) {
  (void)sigma;
  ClusterPreset p;
  // Zone tuple ids with P = 2 zones: id = mu_c0 + 2 mu_c1 (0 = v > 0).
  // Manifold id c is cluster c's copy of v = 0. Guess harvested from a
  // settled quotient simulation at sigma = -0.03; Newton re-solves it
  // across the stable window.
  p.tmpl.events = {{1, 0, +1}, {0, 1, -1}, {2, 1, +1}, {0, 0, -1}};
  p.times_guess = {3.2778, 1.3349, 3.2791, 1.2683};
  p.state_guess = (Vec(4) << 0.0, 4.0415, 1.1680, -0.0726).finished();
  return p;
}

std::string partitions_json(const std::vector<ClusterPartition>& parts) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& p : parts) {
    nlohmann::json pj;
    pj["provenance"] = p.provenance;
    pj["blocks"] = p.blocks;
    j.push_back(pj);
  }
  return j.dump(2);
}

}  // namespace pwlnet
