#!/usr/bin/env python3
"""Generates the coarse mesh for the cylinder scattering domain.

Domain: (-1,1)^2 minus the disk of radius 0.2 about (0,-1). Nominal mesh
size 1/8. Left/right sides are dirichlet_p, top and the flat bottom parts
neumann_u, the half circle scatterer. Interior points form a hexagonal
lattice whose rows meet the left and right sides at boundary vertices.

    python3 tools/make_scattering_mesh.py data/scattering_coarse.mesh
"""
import math
import sys

import numpy as np
from scipy.spatial import Delaunay

ROWS = 18
DY = 2.0 / ROWS
H = 2.0 * DY / math.sqrt(3.0)
CENTER = np.array([0.0, -1.0])
RADIUS = 0.2


def boundary_loop():
    """Counterclockwise boundary points with the tag of the segment that starts at each."""
    pts, tags = [], []

    def line(a, b, n, tag):
        for i in range(n):
            s = i / n
            pts.append((a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])))
            tags.append(tag)

    line((-1, -1), (-0.2, -1), 6, "neumann_u")
    for i in range(5):  # from angle pi down to 0 over the top of the circle
        phi = math.pi - math.pi * i / 5
        pts.append((CENTER[0] + RADIUS * math.cos(phi), CENTER[1] + RADIUS * math.sin(phi)))
        tags.append("scatterer")
    line((0.2, -1), (1, -1), 6, "neumann_u")
    line((1, -1), (1, 1), ROWS, "dirichlet_p")
    line((1, 1), (-1, 1), 16, "neumann_u")
    line((-1, 1), (-1, -1), ROWS, "dirichlet_p")
    return np.array(pts), tags


def interior_points(boundary):
    out = []
    row = 1
    y = -1 + DY
    while y < 1 - 0.5 * DY:
        x = -1 + (H / 2 if row % 2 else H)
        while x < 1 - 0.45 * H:
            p = np.array([x, y])
            far = np.min(np.linalg.norm(boundary - p, axis=1)) > 0.45 * H
            if far and np.linalg.norm(p - CENTER) > RADIUS + 0.7 * H:
                out.append((x, y))
            x += H
        y += DY
        row += 1
    return np.array(out)


def main(path):
    bpts, btags = boundary_loop()
    pts = np.vstack([bpts, interior_points(bpts)])
    tri = Delaunay(pts)
    cells = []
    for simplex in tri.simplices:
        c = pts[simplex].mean(axis=0)
        if np.linalg.norm(c - CENTER) < RADIUS:
            continue
        a, b, d = pts[simplex]
        if (b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]) < 0:
            simplex = simplex[[0, 2, 1]]
        cells.append(simplex)
    nb = len(bpts)
    segments = [(i, (i + 1) % nb, btags[i]) for i in range(nb)]

    # the boundary of the triangulation must be exactly the prescribed loop
    count = {}
    for c in cells:
        for i in range(3):
            e = tuple(sorted((int(c[i]), int(c[(i + 1) % 3]))))
            count[e] = count.get(e, 0) + 1
    boundary = {e for e, k in count.items() if k == 1}
    wanted = {tuple(sorted((a, b))) for a, b, _ in segments}
    if boundary != wanted:
        sys.exit("triangulation boundary does not match the domain boundary")

    min_angle = 180.0
    for c in cells:
        p = pts[c]
        for i in range(3):
            u = p[(i + 1) % 3] - p[i]
            v = p[(i + 2) % 3] - p[i]
            ang = math.degrees(math.acos(np.dot(u, v) / np.linalg.norm(u) / np.linalg.norm(v)))
            min_angle = min(min_angle, ang)

    with open(path, "w") as f:
        f.write("# cylinder scattering domain, nominal h = 1/8\n")
        f.write("trimesh 1\n")
        f.write(f"vertices {len(pts)}\n")
        for x, y in pts:
            f.write(f"{x:.17g} {y:.17g}\n")
        f.write(f"cells {len(cells)}\n")
        for c in cells:
            f.write(f"{c[0]} {c[1]} {c[2]}\n")
        f.write(f"boundary {len(segments)}\n")
        for a, b, t in segments:
            f.write(f"{a} {b} {t}\n")
    lengths = [np.linalg.norm(pts[c[i]] - pts[c[(i + 1) % 3]]) for c in cells for i in range(3)]
    print(f"edge lengths {min(lengths):.4f}..{max(lengths):.4f}")
    print(f"{len(pts)} vertices, {len(cells)} cells, min angle {min_angle:.1f} deg")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/scattering_coarse.mesh")
