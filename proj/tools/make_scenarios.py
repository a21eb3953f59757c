#!/usr/bin/env python3
"""Regenerates the scenario files under scenarios/ and tubes/."""

import json
import math
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def dump(path, data):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=1) + "\n")


def r(x):
    return round(x, 6)


def sine_tube():
    length, period, amplitude = 20.0, 20.0, 2.5
    w = 2 * math.pi / period

    def frame(x):
        y = 0.5 * amplitude * (1 - math.cos(w * x))
        slope = 0.5 * amplitude * w * math.sin(w * x)
        norm = math.hypot(1.0, slope)
        return (x, y), (-slope / norm, 1.0 / norm)

    columns = [(1.0, 3.0), (2.1, 2.3), (3.2, 1.6), (4.3, 0.9)]
    robots = []
    for x, speed in columns:
        (px, py), (nx, ny) = frame(x)
        for lam in (2.2, 1.1, 0.0, -1.1, -2.2):
            robots.append({"id": len(robots) + 1, "position": [r(px + lam * nx), r(py + lam * ny)], "v_max": speed})
    return {
        "name": "sine-tube-20",
        "note": "reconstructed sine tube; amplitude, period and width profile are not published and were chosen here",
        "tube": {"kind": "sine", "length": length, "period": period, "amplitude": amplitude,
                 "half_width": 2.9, "pinch": 0.6, "spacing": 0.1},
        "robot_defaults": {"r_s": 0.4, "r_a": 0.8},
        "robots": robots,
        "controller": {"variant": "modified", "k1": 1.0, "k2": 1.0, "k3": 1.0,
                       "eps_m": 1e-6, "eps_t": 1e-6, "eps_s": 1e-6, "eps_0": 0.1},
        "dt": 0.01, "duration": 25.0, "stride": 10,
    }


def lab_analog():
    xs = [0.1 * k for k in range(81)]
    points = [[r(x), r(0.4 * math.sin(math.pi * x / 8.0))] for x in xs]
    widths = [r(1.0 - 0.3 * x / 8.0) for x in xs]
    robots = []
    for x in (1.1, 0.6):
        y = 0.4 * math.sin(math.pi * x / 8.0)
        slope = 0.4 * math.pi / 8.0 * math.cos(math.pi * x / 8.0)
        norm = math.hypot(1.0, slope)
        for lam in (0.5, 0.0, -0.5):
            robots.append({"id": len(robots) + 1,
                           "position": [r(x - lam * slope / norm), r(y + lam / norm)]})
    return {
        "name": "lab-analog-6",
        "note": "simulated stand-in for a six-robot indoor run",
        "tube": {"kind": "waypoints", "points": points, "half_widths": widths, "spacing": 0.05},
        "robot_defaults": {"r_s": 0.2, "r_a": 0.4, "v_max": 0.5},
        "robots": robots,
        "controller": {"variant": "modified"},
        "dt": 0.01, "duration": 22.0, "stride": 10,
    }


def catmull_rom(c, t, i):
    p1, p2 = c[i], c[i + 1]
    p0 = c[i - 1] if i > 0 else [2 * p1[k] - p2[k] for k in range(2)]
    p3 = c[i + 2] if i + 2 < len(c) else [2 * p2[k] - p1[k] for k in range(2)]
    t2, t3 = t * t, t * t * t
    pos = [0.5 * (2 * p1[k] + (p2[k] - p0[k]) * t + (2 * p0[k] - 5 * p1[k] + 4 * p2[k] - p3[k]) * t2
                  + (3 * p1[k] - p0[k] - 3 * p2[k] + p3[k]) * t3) for k in range(2)]
    vel = [0.5 * ((p2[k] - p0[k]) + 2 * (2 * p0[k] - 5 * p1[k] + 4 * p2[k] - p3[k]) * t
                  + 3 * (3 * p1[k] - p0[k] - 3 * p2[k] + p3[k]) * t2) for k in range(2)]
    return pos, vel


def teach_loop():
    waypoints = [[11.8, 3.6], [20.0, 0.0], [32.0, -8.0], [41.0, 0.0], [31.0, 7.0]]
    # Pillars inside the two sharp turns keep the inner side clear of the curvature limit.
    obstacles = [[32.07, -5.4], [39.75, 0.0], [24.5, 1.8], [35.5, -10.9], [44.3, -0.5], [33.0, 9.8]]
    robots = []
    for t in (0.45, 0.2):
        (px, py), (vx, vy) = catmull_rom(waypoints, t, 0)
        norm = math.hypot(vx, vy)
        nx, ny = -vy / norm, vx / norm
        for lam in (1.8, 0.6, -0.6, -1.8):
            robots.append({"id": len(robots) + 1, "position": [r(px + lam * nx), r(py + lam * ny)]})
    return {
        "name": "teach-loop-8",
        "note": "tube grown around a spline through taught waypoints with synthetic obstacles",
        "tube": {"kind": "trajectory", "waypoints": waypoints, "samples_per_segment": 60,
                 "obstacles": obstacles, "clearance_cap": 3.0, "spacing": 0.1},
        "robot_defaults": {"r_s": 0.4, "r_a": 0.8, "v_max": 3.0},
        "robots": robots,
        "controller": {"variant": "modified"},
        "dt": 0.01, "duration": 23.0, "stride": 10,
    }


def full_three():
    return {
        "name": "straight-full-3",
        "tube": {"kind": "waypoints", "points": [[0.0, 0.0], [12.0, 0.0]], "half_width": 2.0, "spacing": 0.1},
        "robot_defaults": {"r_s": 0.4, "r_a": 0.8, "v_max": 1.0},
        "robots": [{"id": 1, "position": [1.0, -0.6]}, {"id": 2, "position": [1.0, 0.6]},
                   {"id": 3, "position": [2.2, 0.0]}],
        "controller": {"variant": "full"},
        "dt": 0.01, "duration": 15.0, "stride": 10,
    }


def improper_corner():
    return {"kind": "waypoints", "points": [[0.0, 0.0], [5.0, 0.0], [5.0, 5.0]], "half_width": 1.5,
            "spacing": 0.1}


if __name__ == "__main__":
    dump(ROOT / "scenarios" / "sine_tube.json", sine_tube())
    dump(ROOT / "scenarios" / "lab_analog.json", lab_analog())
    dump(ROOT / "scenarios" / "teach_loop.json", teach_loop())
    dump(ROOT / "scenarios" / "full_three.json", full_three())
    dump(ROOT / "tubes" / "improper_corner.json", improper_corner())
