#pragma once

// Declarative description of piecewise-linear systems: affine dynamics per
// zone, affine switching manifolds with optional jump rules, and a built-in
// model zoo.

#include "pwlnet/numerics.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace pwlnet {

/// Distance below which a state counts as "on" a manifold.
inline constexpr double kBoundaryTol = 1e-12;

struct ZoneDynamics {
  Mat A;
  Vec b;
  // Sign requirement per manifold: +1 needs h > 0, -1 needs h < 0,
  // 0 means the manifold does not bound this zone.
  std::vector<int> signs;
  std::string name;
};

struct JumpRule {
  Mat M;
  Vec q;
  Vec apply(const Vec& x) const { return M * x + q; }
  bool is_identity() const;
  static JumpRule identity(int m);
};

struct Manifold {
  Vec normal;
  double offset = 0.0;
  JumpRule jump;  // identity for plain crossings
  // Zone entered after an event with ∇h·ẋ > 0 (up) or < 0 (down);
  // -1 means "derive by flipping this manifold's sign slot".
  int target_up = -1;
  int target_down = -1;
  bool fires = false;     // spike / impact marker
  bool detector = false;  // measurement-only: no zone change, no jump
  std::string name;

  double h(const Vec& x) const { return normal.dot(x) - offset; }
};

enum class SmoothnessClass { Continuous, Filippov, Impacting, Automaton };

std::string to_string(SmoothnessClass c);
SmoothnessClass smoothness_from_string(const std::string& s);

/// Periodic piecewise-constant additive drive. Segment k contributes
/// values.col(k) to dx/dt for local time in [breaks[k], breaks[k+1]),
/// with breaks.front() == 0 and an implicit final break at `period`.
struct Forcing {
  double period = 0.0;
  std::vector<double> breaks;
  Mat values;

  bool empty() const { return period <= 0.0; }
  Vec at(double t) const;
  int segment_at(double local) const;
};

struct PwlSystem {
  int dimension = 0;
  std::vector<ZoneDynamics> zones;
  std::vector<Manifold> manifolds;
  SmoothnessClass smoothness = SmoothnessClass::Continuous;
  Forcing forcing;
  std::string name;
  std::map<std::string, double> params;

  int num_zones() const { return static_cast<int>(zones.size()); }
  int num_manifolds() const { return static_cast<int>(manifolds.size()); }

  /// Structural checks plus, for class Continuous, agreement of the two
  /// adjacent vector fields at 100 sampled points per manifold (1e-9).
  void validate() const;

  /// Post-event zone for a crossing of manifold k in the given direction
  /// (+1 for ∇h·ẋ > 0). Uses the explicit target when set, otherwise flips
  /// the manifold's sign slot in `from_zone`.
  int event_target(int manifold, int direction, int from_zone) const;
};

/// Unique zone whose inequality set x satisfies. Throws BoundaryError when
/// x is within kBoundaryTol of any manifold, and ValidationError for
/// automaton-class systems (their zones are not state-space regions).
int zone_of(const PwlSystem& sys, const Vec& x);

/// Exact in-zone flow G(t;A)x0 + K(t;A)b (+ forcing, treated window-wise).
/// t0 is the absolute start time; it only matters when forcing is present.
Vec flow(const PwlSystem& sys, int zone, const Vec& x0, double t,
         double t0 = 0.0);

/// Right-hand side at x. On a Filippov manifold with opposing normal
/// components this is the sliding field from the convex (Filippov)
/// extension; on a transversally-crossed Filippov manifold it is the field
/// of the side being entered.
Vec vector_field(const PwlSystem& sys, const Vec& x, double t = 0.0);
Vec vector_field_in_zone(const PwlSystem& sys, int zone, const Vec& x,
                         double t = 0.0);

/// Filippov convexification weight for manifold k at x (Eq. for sliding:
/// the field is ς f_up + (1-ς) f_down with ḣ = 0).
double sliding_weight(const PwlSystem& sys, int manifold, const Vec& x,
                      double t = 0.0);

// ---------------------------------------------------------------------------
// Model zoo
// ---------------------------------------------------------------------------

/// Builds one of the built-in models. Unspecified parameters take the
/// defaults used in the reference figures; unknown names or parameter
/// values that violate a model constraint throw ValidationError.
PwlSystem builtin_model(const std::string& name,
                        const std::map<std::string, double>& params = {});

std::vector<std::string> builtin_model_names();

/// Appends event-driven alpha-synapse variables (s, u) to every zone of a
/// planar model: ds/dt = alpha (u - s), du/dt = -alpha u, with u kicked by
/// alpha at every firing event. `self_drive` adds that coefficient times s
/// to the v-equation (the row-sum self input of a non-balanced network).
PwlSystem with_alpha_synapse(const PwlSystem& sys, double alpha,
                             double self_drive = 0.0, int v_index = 0);

// ---------------------------------------------------------------------------
// Serialization (model-definition files)
// ---------------------------------------------------------------------------

nlohmann::json to_json(const PwlSystem& sys);
PwlSystem system_from_json(const nlohmann::json& j);
PwlSystem load_system(const std::string& path);
void save_system(const PwlSystem& sys, const std::string& path);

}  // namespace pwlnet
