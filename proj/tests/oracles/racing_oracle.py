#!/usr/bin/env python3
"""Independent reference computation of race-track geometry features.

Pure-stdlib implementation of the closed Catmull-Rom/Bezier track pipeline
and the 14 polyline features. Used to derive the frozen constants in
tests/racing_test.cpp (circle/square oracles and the unstructured-generator
angle statistics). Run directly to print the reference values.
"""
import math
import random
import statistics

SAMPLES_PER_SEG = 40
PLAYFIELD = 100.0
STD_THRESHOLD = 0.15
SIG_ANGLE = 0.1
EPS = 1e-12


DEDUP_EPS = 1e-9


def angle_sort(points):
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def dedupe(points):
    """Merge consecutive duplicates of an angle-sorted ring, wrap included."""
    distinct = []
    for p in points:
        if not distinct or math.dist(distinct[-1], p) > DEDUP_EPS:
            distinct.append(p)
    while len(distinct) > 1 and math.dist(distinct[-1], distinct[0]) <= DEDUP_EPS:
        distinct.pop()
    return distinct


def catmull_rom_bezier(p0, p1, p2, p3):
    """Centripetal Catmull-Rom span p1..p2 as a cubic Bezier."""
    def knot(a, b, prev):
        return prev + max(math.sqrt(math.dist(a, b)), EPS)

    t0 = 0.0
    t1 = knot(p0, p1, t0)
    t2 = knot(p1, p2, t1)
    t3 = knot(p2, p3, t2)
    m1 = tuple((t2 - t1) * ((p1[i] - p0[i]) / max(t1 - t0, EPS)
                            - (p2[i] - p0[i]) / max(t2 - t0, EPS)
                            + (p2[i] - p1[i]) / max(t2 - t1, EPS)) for i in range(2))
    m2 = tuple((t2 - t1) * ((p2[i] - p1[i]) / max(t2 - t1, EPS)
                            - (p3[i] - p1[i]) / max(t3 - t1, EPS)
                            + (p3[i] - p2[i]) / max(t3 - t2, EPS)) for i in range(2))
    b1 = tuple(p1[i] + m1[i] / 3.0 for i in range(2))
    b2 = tuple(p2[i] - m2[i] / 3.0 for i in range(2))
    return (p1, b1, b2, p2)


def bezier_point(b, t):
    u = 1.0 - t
    return tuple(u * u * u * b[0][i] + 3 * u * u * t * b[1][i]
                 + 3 * u * t * t * b[2][i] + t * t * t * b[3][i] for i in range(2))


def bezier_curvature(b, t):
    u = 1.0 - t
    d1 = tuple(3 * u * u * (b[1][i] - b[0][i]) + 6 * u * t * (b[2][i] - b[1][i])
               + 3 * t * t * (b[3][i] - b[2][i]) for i in range(2))
    d2 = tuple(6 * u * (b[2][i] - 2 * b[1][i] + b[0][i])
               + 6 * t * (b[3][i] - 2 * b[2][i] + b[1][i]) for i in range(2))
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    speed = math.hypot(d1[0], d1[1])
    if speed < EPS:
        return 0.0
    return abs(cross) / (speed ** 3)


def build_track(control_points):
    """control_points: ordered playfield-scale points. Returns polyline + per-segment data."""
    n = len(control_points)
    polyline = []
    seg_curv = []
    seg_len = []
    for i in range(n):
        p0 = control_points[(i - 1) % n]
        p1 = control_points[i]
        p2 = control_points[(i + 1) % n]
        p3 = control_points[(i + 2) % n]
        b = catmull_rom_bezier(p0, p1, p2, p3)
        pts = [bezier_point(b, t / SAMPLES_PER_SEG) for t in range(SAMPLES_PER_SEG)]
        length = 0.0
        prev = pts[0]
        for q in pts[1:] + [bezier_point(b, 1.0)]:
            length += math.dist(prev, q)
            prev = q
        polyline.extend(pts)
        seg_curv.append(bezier_curvature(b, 0.5))
        seg_len.append(length)
    return polyline, seg_curv, seg_len


def features(polyline, seg_curv, seg_len):
    n = len(polyline)
    xs = [p[0] for p in polyline]
    ys = [p[1] for p in polyline]
    dists = [math.dist(polyline[i], polyline[(i + 1) % n]) for i in range(n)]
    length = sum(dists)
    area = abs(sum(polyline[i][0] * polyline[(i + 1) % n][1]
                   - polyline[(i + 1) % n][0] * polyline[i][1]
                   for i in range(n))) / 2.0
    tac = 0.0
    sac = 0.0
    for i in range(n):
        a = polyline[(i - 1) % n]
        b = polyline[i]
        c = polyline[(i + 1) % n]
        v1 = (b[0] - a[0], b[1] - a[1])
        v2 = (c[0] - b[0], c[1] - b[1])
        if math.hypot(*v1) < EPS or math.hypot(*v2) < EPS:
            continue
        d = math.atan2(v1[0] * v2[1] - v1[1] * v2[0], v1[0] * v2[0] + v1[1] * v2[1])
        tac += abs(d)
        if abs(d) > SIG_ANGLE:
            sac += abs(d)

    def median(v):
        s = sorted(v)
        m = len(s) // 2
        return s[m] if len(s) % 2 else 0.5 * (s[m - 1] + s[m])

    def pvar(v):
        mu = sum(v) / len(v)
        return sum((x - mu) ** 2 for x in v) / len(v)

    return {
        'CurveLength': length,
        'EnclosedArea': area,
        'AreaToLengthRatio': area / length if length > 0 else 0.0,
        'CenterOfMassX': sum(xs) / n,
        'CenterOfMassY': sum(ys) / n,
        'MedianX': median(xs),
        'MedianY': median(ys),
        'VarianceX': pvar(xs),
        'VarianceY': pvar(ys),
        'TotalAngleChanges': tac,
        'SignificantAngleChanges': sac,
        'AverageCurvature': sum(seg_curv) / len(seg_curv),
        'TotalCurvature': sum(k * l for k, l in zip(seg_curv, seg_len)),
        'CurveDistancesVariance': pvar(dists),
    }


def generate_s(genotype, reject=True):
    pts = [(genotype[2 * i] * PLAYFIELD, genotype[2 * i + 1] * PLAYFIELD)
           for i in range(len(genotype) // 2)]
    sx = math.sqrt(pvar_list([p[0] for p in pts]))
    sy = math.sqrt(pvar_list([p[1] for p in pts]))
    if reject and min(sx, sy) < STD_THRESHOLD * PLAYFIELD:
        return None
    ring = dedupe(angle_sort(pts))
    if len(ring) < 3:
        return None
    return build_track(ring)


def pvar_list(v):
    mu = sum(v) / len(v)
    return sum((x - mu) ** 2 for x in v) / len(v)


def project_u_k(genotype, k):
    """Clamp each gene to the central 1/k band around 0.5, then magnify by k."""
    half = 0.5 / k
    out = []
    for g in genotype:
        v = min(max(g, 0.5 - half), 0.5 + half)
        out.append((v - 0.5) * k + 0.5)
    return out


def main():
    # --- circle oracle: 12 control points on a centered circle, radius 40 ---
    r = 40.0
    pts = [(50 + r * math.cos(2 * math.pi * i / 12), 50 + r * math.sin(2 * math.pi * i / 12))
           for i in range(12)]
    poly, sc, sl = build_track(pts)
    f = features(poly, sc, sl)
    print('--- circle r=40 ---')
    print(f"area {f['EnclosedArea']:.6f} (pi r^2 = {math.pi * r * r:.6f}, "
          f"rel err {abs(f['EnclosedArea'] - math.pi * r * r) / (math.pi * r * r):.2e})")
    print(f"length {f['CurveLength']:.6f} (2 pi r = {2 * math.pi * r:.6f}, "
          f"rel err {abs(f['CurveLength'] - 2 * math.pi * r) / (2 * math.pi * r):.2e})")
    print(f"avg curvature {f['AverageCurvature']:.8f} (1/r = {1 / r:.8f}, "
          f"rel err {abs(f['AverageCurvature'] - 1 / r) * r:.2e})")
    print(f"TAC {f['TotalAngleChanges']:.8f} (2 pi = {2 * math.pi:.8f})")
    print(f"total curvature {f['TotalCurvature']:.8f}")
    print(f"CX {f['CenterOfMassX']:.6f} CY {f['CenterOfMassY']:.6f} "
          f"VarX {f['VarianceX']:.6f} VarY {f['VarianceY']:.6f}")

    # --- square oracle: 12 points on an axis-aligned square, 3 per side ---
    sq = []
    for i in range(3):
        sq.append((20 + 20 * i, 20))
    for i in range(3):
        sq.append((80, 20 + 20 * i))
    for i in range(3):
        sq.append((80 - 20 * i, 80))
    for i in range(3):
        sq.append((20, 80 - 20 * i))
    poly, sc, sl = build_track(angle_sort(sq))
    f = features(poly, sc, sl)
    print('--- square side 60 ---')
    print(f"CX {f['CenterOfMassX']:.6f} CY {f['CenterOfMassY']:.6f}")
    print(f"VarX {f['VarianceX']:.6f} VarY {f['VarianceY']:.6f} "
          f"(|VarX-VarY| = {abs(f['VarianceX'] - f['VarianceY']):.2e})")
    print(f"TAC {f['TotalAngleChanges']:.8f} (2 pi = {2 * math.pi:.8f})")
    print(f"area {f['EnclosedArea']:.4f} length {f['CurveLength']:.4f}")

    # --- golden genotype: fixed 12-point genotype, all 14 features at full precision ---
    golden = [0.61, 0.92, 0.07, 0.55, 0.30, 0.13, 0.85, 0.47, 0.51, 0.03, 0.18, 0.81,
              0.94, 0.70, 0.42, 0.61, 0.66, 0.30, 0.11, 0.28, 0.77, 0.90, 0.28, 0.44]
    f = features(*generate_s(golden, reject=False))
    print('--- golden genotype (12 points) ---')
    order = ['CurveLength', 'EnclosedArea', 'AreaToLengthRatio', 'CenterOfMassX',
             'CenterOfMassY', 'MedianX', 'MedianY', 'VarianceX', 'VarianceY',
             'TotalAngleChanges', 'SignificantAngleChanges', 'AverageCurvature',
             'TotalCurvature', 'CurveDistancesVariance']
    for name in order:
        print(f"{name} {f[name]:.17g}")

    # --- E_S and E_U_32 statistics ---
    rng = random.Random(123)
    es_tac = []
    es_cx = []
    rejected = 0
    while len(es_tac) < 2000:
        g = [rng.random() for _ in range(24)]
        t = generate_s(g)
        if t is None:
            rejected += 1
            continue
        f = features(*t)
        es_tac.append(f['TotalAngleChanges'])
        es_cx.append(f['CenterOfMassX'])
    print('--- E_S (2000 accepted) ---')
    print(f"rejection rate {rejected / (rejected + len(es_tac)):.3f}")
    print(f"TAC median {statistics.median(es_tac):.4f} mean {statistics.fmean(es_tac):.4f} "
          f"(2 pi = {2 * math.pi:.4f})")
    print(f"CX mean {statistics.fmean(es_cx):.3f} median {statistics.median(es_cx):.3f}")

    eu_tac = []
    eu_invalid = 0
    for _ in range(2000):
        g = [rng.random() for _ in range(24)]
        t = generate_s(project_u_k(g, 32), reject=False)
        if t is None:
            eu_invalid += 1
            continue
        f = features(*t)
        eu_tac.append(f['TotalAngleChanges'])
    print('--- E_U_32 (2000) ---')
    print(f"invalid (fewer than 3 distinct points): {eu_invalid}")
    print(f"TAC median {statistics.median(eu_tac):.4f} mean {statistics.fmean(eu_tac):.4f} "
          f"min {min(eu_tac):.4f} p90 {sorted(eu_tac)[1800]:.4f}")
    print(f"within [2pi-0.3, 2pi+1.0]: "
          f"{sum(2 * math.pi - 0.3 <= v <= 2 * math.pi + 1.0 for v in eu_tac) / len(eu_tac):.3f}")


if __name__ == '__main__':
    main()
