#include "tana/fall/detector.hpp"

#include <cmath>

#include "tana/error.hpp"
#include "tana/spaces/standard.hpp"

namespace tana::fall {

void validate(const DetectorParams& p) {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidDescriptor, field);
  };
  positive(p.theta_freefall_g, "theta_freefall_g");
  positive(p.d_freefall_ms, "d_freefall_ms");
  positive(p.theta_impact_g, "theta_impact_g");
  positive(p.max_gap_ms, "max_gap_ms");
  positive(p.theta_loud_db, "theta_loud_db");
  positive(p.refractory_ms, "refractory_ms");
  positive(p.h_floor_m, "h_floor_m");
  positive(p.fuse_window_s, "fuse_window_s");
  positive(p.grid_resolution_m, "grid_resolution_m");
  if (!(p.theta_freefall_g < 1.0)) throw Error(ErrorCode::InvalidDescriptor, "theta_freefall_g");
  if (!(p.theta_impact_g > 1.0)) throw Error(ErrorCode::InvalidDescriptor, "theta_impact_g");
}

std::string_view to_string(Confidence confidence) {
  return confidence == Confidence::Corroborated ? "corroborated" : "accel_only";
}

std::vector<ImpactEvent> detect_impacts(const std::vector<spaces::NormalizedSample>& samples,
                                        const DetectorParams& params) {
  enum class State { Idle, Freefall, AwaitImpact, Impact };
  State state = State::Idle;
  double freefall_start = 0.0;
  double freefall_end = 0.0;
  double peak = 0.0;
  double peak_t = 0.0;
  std::string entity;
  std::vector<ImpactEvent> out;

  const double min_freefall_s = params.d_freefall_ms / 1000.0;
  const double max_gap_s = params.max_gap_ms / 1000.0;

  for (const auto& s : samples) {
    const auto* a = std::get_if<spaces::Accel3>(&s.payload.value);
    if (!a || s.payload.space_id != spaces::kAccelG) {
      throw Error(ErrorCode::WrongPayloadSpace, "impact detection needs accel-g payloads, got " + s.payload.space_id);
    }
    if (const auto* body = std::get_if<spaces::BodyWorn>(&s.position.where)) entity = body->entity_id;
    const double t = s.time.t_s;
    const double m = a->magnitude();

    // A sample can close one state and open the next, so re-dispatch until it settles.
    for (bool again = true; again;) {
      again = false;
      switch (state) {
        case State::Idle:
          if (m < params.theta_freefall_g) {
            state = State::Freefall;
            freefall_start = t;
          }
          break;
        case State::Freefall:
          if (m >= params.theta_freefall_g) {
            freefall_end = t;
            state = freefall_end - freefall_start >= min_freefall_s - 1e-9 ? State::AwaitImpact : State::Idle;
            again = true;
          }
          break;
        case State::AwaitImpact:
          if (t - freefall_end > max_gap_s + 1e-9) {
            state = State::Idle;
            again = true;
          } else if (m > params.theta_impact_g) {
            state = State::Impact;
            peak = m;
            peak_t = t;
          } else if (m < params.theta_freefall_g) {
            state = State::Freefall;
            freefall_start = t;
          }
          break;
        case State::Impact:
          if (m > params.theta_impact_g) {
            if (m > peak) {
              peak = m;
              peak_t = t;
            }
          } else {
            out.push_back({peak_t, entity, peak, true});
            state = State::Idle;
            again = true;
          }
          break;
      }
    }
  }
  if (state == State::Impact) out.push_back({peak_t, entity, peak, true});
  return out;
}

std::vector<SoundEvent> detect_sound_events(const std::vector<spaces::NormalizedSample>& frames,
                                            const DetectorParams& params) {
  std::vector<SoundEvent> out;
  bool previous_loud = false;
  std::optional<double> last_candidate;
  const double refractory_s = params.refractory_ms / 1000.0;

  for (const auto& f : frames) {
    const auto* frame = std::get_if<spaces::SoundFrame>(&f.payload.value);
    if (!frame || f.payload.space_id != spaces::kTdoaFrame) {
      throw Error(ErrorCode::WrongPayloadSpace, "sound detection needs tdoa-frame payloads, got " + f.payload.space_id);
    }
    const bool loud = frame->loudness_db >= params.theta_loud_db;
    const double t = f.time.t_s;
    if (loud && !previous_loud && (!last_candidate || t - *last_candidate >= refractory_s - 1e-9)) {
      SoundEvent e;
      e.t_s = t;
      e.loudness_db = frame->loudness_db;
      e.offsets_us = frame->offsets_us;
      e.array_position = f.position;
      out.push_back(std::move(e));
      last_candidate = t;
    }
    previous_loud = loud;
  }
  return out;
}

std::vector<FallAlarm> fuse_events(const std::vector<ImpactEvent>& impacts, const std::vector<SoundEvent>& sounds,
                                   const DetectorParams& params, const RoomLookup& room_lookup) {
  std::vector<bool> used(sounds.size(), false);
  std::vector<FallAlarm> out;
  for (const auto& impact : impacts) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < sounds.size(); ++i) {
      if (used[i] || sounds[i].estimated_height_m > params.h_floor_m) continue;
      const double dt = std::abs(sounds[i].t_s - impact.t_s);
      if (dt > params.fuse_window_s + 1e-9) continue;
      if (!best || dt < std::abs(sounds[*best].t_s - impact.t_s)) best = i;
    }
    FallAlarm alarm{impact.t_s, impact.entity_id, Confidence::AccelOnly, std::nullopt};
    if (best) {
      used[*best] = true;
      alarm.confidence = Confidence::Corroborated;
    } else if (params.accel_only_policy == AccelOnlyPolicy::Suppressed) {
      continue;
    }
    if (room_lookup) alarm.room = room_lookup(impact, best ? &sounds[*best] : nullptr);
    out.push_back(std::move(alarm));
  }
  return out;
}

}  // namespace tana::fall
