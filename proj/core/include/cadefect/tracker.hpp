#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cadefect/ca.hpp"
#include "cadefect/defect.hpp"
#include "cadefect/spectral.hpp"
#include "cadefect/subshift.hpp"

namespace cadefect::tracker {

using spectral::Displacement;
using symbolic::CyclicConfig;

// xorshift64* generator; a zero seed is replaced by a fixed constant.
class XorShift64Star {
 public:
  explicit XorShift64Star(std::uint64_t seed);
  std::uint64_t next();
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n)

 private:
  std::uint64_t s_;
};

CyclicConfig random_config(std::size_t n, int k, std::uint64_t seed);

struct Spacetime {
  std::vector<CyclicConfig> rows;  // row t = Phi^t(initial)
};

Spacetime simulate(const ca::Ca1D& ca, const CyclicConfig& init, int steps);

// Toroidal interval: cells start, start+1, ..., start+length-1 (mod N), 0 <= start < N.
struct Interval {
  std::int64_t start = 0;
  std::int64_t length = 0;
  bool operator==(const Interval& o) const { return start == o.start && length == o.length; }
};

// One defective interval of one row, with its flanking domains.
struct Blob {
  Interval cells;
  int left_component = -1;
  int right_component = -1;
  std::optional<Displacement> label;  // left flank label minus right flank label, same class only
};

struct ParticleTrack {
  int id = 0;
  std::int64_t torus = 0;
  int birth = 0;  // first row
  int death = 0;  // last row
  std::vector<Interval> intervals;  // rows birth..death
  std::vector<std::optional<Displacement>> row_labels;
  int left_component = -1;   // most frequent flank components
  int right_component = -1;
  int label_class = -1;      // displacement class, -1 for interfaces
  std::optional<Displacement> label;  // most frequent row label
  std::vector<int> parents;
  std::vector<int> children;
  int death_group = 0;  // least id among tracks that vanished in the same cluster
};

enum class Verdict { pass, fail, skip };
std::string verdict_name(Verdict v);

struct CollisionEvent {
  int time = 0;
  std::vector<int> incoming;
  std::vector<int> outgoing;
  bool interface_event = false;
  int label_class = -1;
  std::optional<Displacement> incoming_sum;
  std::optional<Displacement> outgoing_sum;
  Verdict verdict = Verdict::skip;
};

struct TrackerOptions {
  int r = 0;            // 0: subshift radius + 1
  int min_domain = 0;   // 0: 2r + 1
  int burn_in = 50;
  int settle = 16;      // tracks shorter than this are treated as collision debris
  double max_defective = 0.5;
  int vanish_gap = 0;   // 0: 2 * min_domain + 2 * CA radius
};

struct StepTotal {
  int time = 0;
  int particles = 0;
  std::optional<Displacement> total;  // sum of row labels when all lie in one class
  int label_class = -1;
};

struct TrackResult {
  int r = 0;
  int min_domain = 0;
  std::vector<ParticleTrack> tracks;
  std::vector<CollisionEvent> events;
  std::vector<StepTotal> totals;
};

// Defective blobs of one row, after fusing defects separated by short domains.
std::vector<Blob> row_blobs(const CyclicConfig& row, const subshift::Subshift1D& x, const spectral::DomainLabeller& labeller,
                            int r, int min_domain);

std::vector<ParticleTrack> extract_particles(const Spacetime& st, const subshift::Subshift1D& x,
                                             const spectral::DomainLabeller& labeller, int ca_radius,
                                             const TrackerOptions& opt, std::vector<StepTotal>* totals = nullptr);

std::vector<CollisionEvent> detect_collisions(const std::vector<ParticleTrack>& tracks, int settle, int first_row, int last_row);

struct ConservationReport {
  int pass = 0;
  int fail = 0;
  int skip = 0;
};

ConservationReport verify_conservation(std::vector<CollisionEvent>& events, const std::vector<ParticleTrack>& tracks,
                                       const spectral::DomainLabeller& labeller);

// Full pipeline; throws Error(no_condensation) when a tracked row is mostly defective.
TrackResult track(const ca::Ca1D& ca, const CyclicConfig& init, int steps, const subshift::Subshift1D& x,
                  const spectral::DomainLabeller& labeller, const TrackerOptions& opt);

}  // namespace cadefect::tracker
