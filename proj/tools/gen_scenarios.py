#!/usr/bin/env python3
"""Writes the bundled scenario files under scenarios/."""
import copy
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent

FLOORPLAN = {
    "rooms": [
        {"id": "kitchen", "x_min": 0, "y_min": 0, "z_min": 0, "x_max": 4, "y_max": 3, "z_max": 3},
        {"id": "living", "x_min": 4, "y_min": 0, "z_min": 0, "x_max": 8, "y_max": 3, "z_max": 3},
    ],
    "adjacency": [["kitchen", "living"]],
}

MICS = [[6.0, 0.05, 0.5], [6.0, 0.05, 1.0], [6.0, 0.05, 1.5]]


def sensors():
    return [
        {"sensor_id": "wrist-accel", "kind": "accelerometer", "scale": 0.001,
         "placement": {"entity": "resident", "attachment": "waist"},
         "period_ticks": 10, "min_period_ticks": 1, "max_period_ticks": 1000},
        {"sensor_id": "mic-array", "kind": "microphone-array", "scale": 0.01,
         "mic_positions": MICS, "period_ticks": 10, "min_period_ticks": 5, "max_period_ticks": 1000},
        {"sensor_id": "kitchen-temp", "kind": "thermometer", "scale": 0.01,
         "placement": {"coords": [1.0, 0.1, 2.0]},
         "period_ticks": 1000, "min_period_ticks": 100, "max_period_ticks": 10000},
    ]


def scenario(name, events, seed=42, duration=12000, noise=None):
    doc = {
        "name": name,
        "seed": seed,
        "duration_ticks": duration,
        "tick_quantum_us": 1000,
        "floorplan": copy.deepcopy(FLOORPLAN),
        "sensors": sensors(),
        "events": events,
    }
    if noise is not None:
        doc["noise"] = noise
    return doc


def fall(t, pos, loudness=85.0):
    return {"kind": "fall", "t_start_ticks": t, "position": pos, "loudness_db": loudness, "entity_id": "resident"}


def music(t, pos, loudness=85.0):
    return {"kind": "music", "t_start_ticks": t, "position": pos, "loudness_db": loudness}


def write(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n")


def main():
    write(ROOT / "scenarios" / "fall1.json",
          scenario("fall1", [fall(5000, [5.0, 1.5, 0.1]), music(12000, [7.0, 2.5, 1.8])], duration=20000))

    quiet = {"accel_sigma_g": 0.0, "tdoa_jitter_us": 0.0}
    suite = {
        "fall_kitchen": [fall(4000, [2.5, 1.5, 0.1])],
        "fall_living": [fall(6000, [5.0, 2.0, 0.15])],
        "fall_living_far": [fall(3000, [7.5, 2.8, 0.05], loudness=90.0)],
        "music_living": [music(4000, [7.0, 2.5, 1.8])],
        "music_kitchen": [music(2000, [3.0, 1.0, 1.8], loudness=90.0), music(8000, [3.0, 1.0, 1.8], loudness=90.0)],
        "music_near": [music(5000, [5.0, 1.0, 1.8], loudness=80.0)],
    }
    for name, events in suite.items():
        write(ROOT / "scenarios" / "suite" / f"{name}.json", scenario(name, events, noise=quiet))


if __name__ == "__main__":
    main()
