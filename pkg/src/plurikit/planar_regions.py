"""Grid-based compact planar sets: dilation, distance, polynomial hulls, and
the ascending carve-and-hull construction.

A region is a bitmap over a square lattice of cell centers; a cell is
occupied when its center lies within h/2 of the ideal set.  The polynomial
hull of a planar compact set is the set plus the bounded connected
components of its complement, so on the grid it is a flood fill from the
frame.  Dilations are closed (cell-center distance <= r); the open/closed
distinction sits below grid resolution and closed sets are what bitmaps can
represent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import DomainError

_EDT_GUARD = 1e-9  # relative guard band for distance-threshold ties

_CROSS = ndimage.generate_binary_structure(2, 1)  # 4-connectivity for background


class GridRegion:
    """Compact subset of the plane as an occupancy bitmap.

    origin is the center of cell (row 0, col 0); cell (iy, ix) has center
    origin + ix*h + 1j*iy*h.  The mask is immutable.
    """

    __slots__ = ("origin", "h", "mask")

    def __init__(self, origin: complex, h: float, mask: np.ndarray):
        if h <= 0:
            raise DomainError("cell size must be positive")
        m = np.asarray(mask, dtype=bool)
        if m.ndim != 2:
            raise DomainError("occupancy mask must be 2-D")
        m = m.copy()
        m.setflags(write=False)
        self.origin = complex(origin)
        self.h = float(h)
        self.mask = m

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    @property
    def is_empty(self) -> bool:
        return not bool(self.mask.any())

    @property
    def cell_count(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def area(self) -> float:
        return self.cell_count * self.h * self.h

    def cell_centers(self) -> np.ndarray:
        iy, ix = np.nonzero(self.mask)
        return self.origin + ix * self.h + 1j * iy * self.h

    def __eq__(self, other):
        if not isinstance(other, GridRegion):
            return NotImplemented
        return (self.h == other.h and self.origin == other.origin
                and self.mask.shape == other.mask.shape
                and bool(np.array_equal(self.mask, other.mask)))

    __hash__ = None

    def __repr__(self):
        return (f"GridRegion(origin={self.origin:.4g}, h=1/{round(1/self.h)}, "
                f"{self.width}x{self.height}, cells={self.cell_count})")


def _lattice_offset(a: GridRegion, b: GridRegion) -> tuple[int, int]:
    if a.h != b.h:
        raise DomainError("regions live on different lattices (cell size)")
    d = (b.origin - a.origin) / a.h
    dx, dy = d.real, d.imag
    if abs(dx - round(dx)) > 1e-6 or abs(dy - round(dy)) > 1e-6:
        raise DomainError("regions live on shifted lattices")
    return int(round(dx)), int(round(dy))


def common_canvas(regions: list[GridRegion], pad: int = 0) -> list[GridRegion]:
    """Re-embed regions on one shared canvas (same origin and dims)."""
    if not regions:
        return []
    ref = regions[0]
    offs = [_lattice_offset(ref, r) for r in regions]
    x0 = min(o[0] for o in offs) - pad
    y0 = min(o[1] for o in offs) - pad
    x1 = max(o[0] + r.width for o, r in zip(offs, regions)) + pad
    y1 = max(o[1] + r.height for o, r in zip(offs, regions)) + pad
    origin = ref.origin + x0 * ref.h + 1j * y0 * ref.h
    out = []
    for (ox, oy), r in zip(offs, regions):
        m = np.zeros((y1 - y0, x1 - x0), dtype=bool)
        m[oy - y0:oy - y0 + r.height, ox - x0:ox - x0 + r.width] = r.mask
        out.append(GridRegion(origin, ref.h, m))
    return out


def embed_on(region: GridRegion, origin: complex, shape: tuple[int, int],
             h: float) -> np.ndarray:
    """Occupancy of `region` re-sampled onto a fixed canvas (cropping any
    cells that fall outside it)."""
    ref = GridRegion(origin, h, np.zeros(shape, dtype=bool))
    dx, dy = _lattice_offset(ref, region)
    out = np.zeros(shape, dtype=bool)
    ys0, xs0 = max(dy, 0), max(dx, 0)
    ye = min(dy + region.height, shape[0])
    xe = min(dx + region.width, shape[1])
    if ye > ys0 and xe > xs0:
        out[ys0:ye, xs0:xe] = region.mask[ys0 - dy:ye - dy, xs0 - dx:xe - dx]
    return out


def trim(region: GridRegion, pad: int = 0) -> GridRegion:
    """Crop to the tight bounding box of the occupied cells."""
    if region.is_empty:
        return GridRegion(region.origin, region.h, np.zeros((1, 1), dtype=bool))
    iy, ix = np.nonzero(region.mask)
    y0, y1 = iy.min() - pad, iy.max() + 1 + pad
    x0, x1 = ix.min() - pad, ix.max() + 1 + pad
    y0c, x0c = max(y0, 0), max(x0, 0)
    m = region.mask[y0c:y1, x0c:x1]
    if pad and (y0 < 0 or x0 < 0 or y1 > region.height or x1 > region.width):
        mm = np.zeros((y1 - y0, x1 - x0), dtype=bool)
        mm[y0c - y0:y0c - y0 + m.shape[0], x0c - x0:x0c - x0 + m.shape[1]] = m
        m = mm
        y0c, x0c = y0, x0
    origin = region.origin + x0c * region.h + 1j * y0c * region.h
    return GridRegion(origin, region.h, m)


def regions_equal(a: GridRegion, b: GridRegion) -> bool:
    """Geometric equality: identical occupied cells on the shared lattice."""
    ta, tb = trim(a), trim(b)
    if ta.is_empty and tb.is_empty:
        return True
    return ta == tb


def region_subset(a: GridRegion, b: GridRegion) -> bool:
    """Every occupied cell of a is occupied in b."""
    if a.is_empty:
        return True
    ca, cb = common_canvas([a, b])
    return bool(np.all(cb.mask[ca.mask]))


def region_union(parts: list[GridRegion]) -> GridRegion:
    if not parts:
        raise DomainError("union of no regions")
    cs = common_canvas(list(parts))
    m = np.zeros_like(cs[0].mask)
    for c in cs:
        m = m | c.mask
    return GridRegion(cs[0].origin, cs[0].h, m)


def region_difference(a: GridRegion, b: GridRegion) -> GridRegion:
    ca, cb = common_canvas([a, b])
    return GridRegion(ca.origin, ca.h, ca.mask & ~cb.mask)


# -- builders ---------------------------------------------------------------

def _snap(value: float, h: float) -> float:
    return round(value / h) * h


def _grid_for_box(x0, x1, y0, y1, h):
    ox = math.floor(x0 / h) * h
    oy = math.floor(y0 / h) * h
    nx = int(math.ceil((x1 - ox) / h)) + 1
    ny = int(math.ceil((y1 - oy) / h)) + 1
    xs = ox + h * np.arange(nx)
    ys = oy + h * np.arange(ny)
    return complex(ox, oy), xs[None, :], ys[:, None]


def disk_region(center: complex, radius: float, h: float) -> GridRegion:
    """Closed disk: cells whose center is within h/2 of the ideal disk."""
    if radius <= 0:
        raise DomainError("radius must be positive")
    c = complex(center)
    r_eff = radius + h / 2.0
    origin, xs, ys = _grid_for_box(c.real - r_eff, c.real + r_eff,
                                   c.imag - r_eff, c.imag + r_eff, h)
    mask = (xs - c.real) ** 2 + (ys - c.imag) ** 2 <= r_eff * r_eff
    return trim(GridRegion(origin, h, mask))


def circle_region(center: complex, radius: float, h: float) -> GridRegion:
    """Circle (curve): the width-h band of cells straddling the ideal circle."""
    if radius <= 0:
        raise DomainError("radius must be positive")
    c = complex(center)
    r_eff = radius + h / 2.0
    origin, xs, ys = _grid_for_box(c.real - r_eff, c.real + r_eff,
                                   c.imag - r_eff, c.imag + r_eff, h)
    dist = np.sqrt((xs - c.real) ** 2 + (ys - c.imag) ** 2)
    mask = np.abs(dist - radius) <= h / 2.0
    return trim(GridRegion(origin, h, mask))


def point_region(z: complex, h: float) -> GridRegion:
    """Single point: the cell(s) whose center lies within h/2 of z."""
    z = complex(z)
    cx = _snap(z.real, h)
    cy = _snap(z.imag, h)
    return GridRegion(complex(cx, cy), h, np.ones((1, 1), dtype=bool))


def rect_region(x0: float, x1: float, y0: float, y1: float, h: float) -> GridRegion:
    """Closed axis-aligned rectangle under the h/2 cell-center rule."""
    if x1 <= x0 or y1 <= y0:
        raise DomainError("degenerate rectangle")
    origin, xs, ys = _grid_for_box(x0 - h, x1 + h, y0 - h, y1 + h, h)
    half = h / 2.0
    mask = ((xs >= x0 - half) & (xs <= x1 + half)
            & (ys >= y0 - half) & (ys <= y1 + half))
    return trim(GridRegion(origin, h, mask))


# -- operations --------------------------------------------------------------

def _distance_field(region: GridRegion, pad: int) -> tuple[np.ndarray, GridRegion]:
    """Euclidean distance (in real units) from every cell to the region."""
    grown = common_canvas([region], pad=pad)[0]
    dist = ndimage.distance_transform_edt(~grown.mask, sampling=grown.h)
    return dist, grown


def neighborhood(S: GridRegion, r: float) -> GridRegion:
    """Dilation by a closed disk of radius r (cell-center metric)."""
    if r < S.h:
        raise DomainError("radius below resolution")
    if S.is_empty:
        return S
    pad = int(math.ceil(r / S.h)) + 1
    dist, grown = _distance_field(S, pad)
    mask = dist <= r * (1.0 + _EDT_GUARD)
    return GridRegion(grown.origin, grown.h, mask)


def distance(z: complex, S: GridRegion) -> float:
    """Euclidean distance from z to the occupied cell centers."""
    if S.is_empty:
        raise DomainError("distance to empty region")
    return float(np.min(np.abs(S.cell_centers() - complex(z))))


def polynomial_hull(S: GridRegion) -> GridRegion:
    """S plus the bounded connected components of its complement.

    The complement is labelled with 4-connectivity (the dual of the
    8-connected foreground); components not touching the frame are filled.
    """
    if S.is_empty:
        return S
    grown = common_canvas([S], pad=1)[0]
    comp = ~grown.mask
    labels, n = ndimage.label(comp, structure=_CROSS)
    border = np.unique(np.concatenate([
        labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]]))
    border = border[border != 0]
    fill = comp & ~np.isin(labels, border)
    return GridRegion(grown.origin, grown.h, grown.mask | fill)


def hull_of_union(parts: list[GridRegion]) -> tuple[GridRegion, bool]:
    """Union of the per-part hulls; falls back to the hull of the union and
    flags the overlap when the parts are not pairwise disjoint."""
    if not parts:
        raise DomainError("hull of no regions")
    canvases = common_canvas(list(parts), pad=1)
    counts = np.zeros(canvases[0].mask.shape, dtype=np.int32)
    for c in canvases:
        counts += c.mask
    union = GridRegion(canvases[0].origin, canvases[0].h, counts > 0)
    if int(counts.max(initial=0)) > 1:
        return polynomial_hull(union), True
    hulls = [polynomial_hull(p) for p in parts]
    merged = region_union(hulls)
    direct = polynomial_hull(union)
    if not regions_equal(merged, direct):
        raise RuntimeError("disjoint-union hull identity failed at this resolution")
    return merged, False


@dataclass
class ConstructionTrace:
    """Per-level record of the carve-and-hull construction."""

    k: int
    L: list[GridRegion]
    K: list[GridRegion]
    G: GridRegion
    F: GridRegion
    V: GridRegion


@dataclass
class Prop1016Report:
    """Verification metrics accumulated across levels."""

    ascending_ok: bool = True
    inside_union_ok: bool = True
    disjoint_ok: bool = True
    hull_union_ok: bool = True
    cover_gap: float = 0.0
    cover_ok: bool = True
    excess_areas: dict = field(default_factory=dict)
    shell_area: float = 0.0
    excess_ok: bool = True


def prop1016_construct(W: list[GridRegion], k_max: int,
                       excess_levels: tuple[int, ...] = (1, 4, 16),
                       ) -> tuple[list[ConstructionTrace], Prop1016Report]:
    """Ascending polynomially convex approximations of a countable union.

    For each level k and component j, carve L_kj = W_j minus the open
    1/k-neighborhood of the earlier components, hull each piece, and dilate
    the union hull F_k by 1/(3k) to get the cover set V_k.  Verifies that
    the F_k ascend, stay inside the union, that carved pieces are pairwise
    disjoint, and measures the finite-level surrogates of the limit
    identities: coverage of the union by F_{k_max} within the carve radius
    plus one cell, and the area of (intersection of V_k, k >= m) outside
    the union against one dilation shell at k_max.
    """
    if not W:
        raise DomainError("construction needs at least one region")
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    for j, Wj in enumerate(W):
        if Wj.is_empty:
            raise DomainError(f"input region {j} is empty")
        if not regions_equal(polynomial_hull(Wj), Wj):
            raise DomainError(f"input region {j} is not polynomially convex")
    h = W[0].h
    if 1.0 / k_max < 3.0 * h:
        raise DomainError("resolution too coarse: need 1/k_max >= 3h")

    margin = int(math.ceil((1.0 / 3.0) / h)) + 2
    canvases = common_canvas(list(W), pad=margin)
    origin = canvases[0].origin
    union_mask = np.zeros_like(canvases[0].mask)
    for c in canvases:
        union_mask |= c.mask
    union = GridRegion(origin, h, union_mask)

    # distance from each cell to W_1 | ... | W_j, for carving
    prefix_dists = []
    acc = np.zeros_like(union_mask)
    for c in canvases:
        acc = acc | c.mask
        prefix_dists.append(ndimage.distance_transform_edt(~acc, sampling=h))

    traces: list[ConstructionTrace] = []
    report = Prop1016Report()
    prev_F = None
    inter_masks = {m: None for m in excess_levels if m <= k_max}

    for k in range(1, k_max + 1):
        r_carve = 1.0 / k
        L_list = []
        for j, c in enumerate(canvases):
            if j == 0:
                Lmask = c.mask
            else:
                keep = prefix_dists[j - 1] >= r_carve * (1.0 - _EDT_GUARD)
                Lmask = c.mask & keep
            L_list.append(GridRegion(origin, h, Lmask))
        # pairwise disjoint: carved pieces exclude earlier components entirely
        total = np.zeros(union_mask.shape, dtype=np.int32)
        for L in L_list:
            total += L.mask
        if int(total.max(initial=0)) > 1:
            report.disjoint_ok = False
        G_mask = total > 0
        G = GridRegion(origin, h, G_mask)
        K_list = [polynomial_hull(L) if not L.is_empty else L for L in L_list]
        F = polynomial_hull(G)
        merged = region_union(K_list) if any(not K.is_empty for K in K_list) else G
        if not regions_equal(merged, F):
            report.hull_union_ok = False
        V = neighborhood(F, 1.0 / (3.0 * k))
        if prev_F is not None and not region_subset(prev_F, F):
            report.ascending_ok = False
        if not region_subset(F, union):
            report.inside_union_ok = False
        prev_F = F
        V_mask = embed_on(V, origin, union_mask.shape, h)
        for m in inter_masks:
            if k >= m:
                inter_masks[m] = V_mask if inter_masks[m] is None else (inter_masks[m] & V_mask)
        traces.append(ConstructionTrace(
            k=k,
            L=[trim(L) for L in L_list],
            K=[trim(K) for K in K_list],
            G=trim(G),
            F=trim(F),
            V=trim(V),
        ))

    # carve-limit coverage: every union cell within 1/k_max (+ one cell) of F
    F_mask = embed_on(traces[-1].F, origin, union_mask.shape, h)
    dist_to_F = ndimage.distance_transform_edt(~F_mask, sampling=h)
    report.cover_gap = float(dist_to_F[union_mask].max(initial=0.0))
    report.cover_ok = report.cover_gap <= 1.0 / k_max + 2.0 * h

    V_final = traces[-1].V
    report.shell_area = V_final.area - traces[-1].F.area
    for m, mask in inter_masks.items():
        if mask is None:
            continue
        excess = mask & ~union.mask
        area = float(np.count_nonzero(excess)) * h * h
        report.excess_areas[m] = area
        if area > report.shell_area + h * h:
            report.excess_ok = False
    return traces, report


# -- file format --------------------------------------------------------------

FORMAT_VERSION = 1


def region_to_text(region: GridRegion) -> str:
    """Run-length-encoded text form (runs alternate empty/occupied)."""
    lines = [f"plurikit-region {FORMAT_VERSION}",
             f"origin {region.origin.real!r} {region.origin.imag!r}",
             f"h {region.h!r}",
             f"size {region.width} {region.height}"]
    for row in region.mask:
        runs = []
        current, count = False, 0
        for v in row:
            if bool(v) == current:
                count += 1
            else:
                runs.append(count)
                current, count = bool(v), 1
        runs.append(count)
        lines.append(" ".join(str(c) for c in runs))
    return "\n".join(lines) + "\n"


def region_from_text(text: str) -> GridRegion:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("plurikit-region"):
        raise DomainError("not a region file")
    origin_parts = lines[1].split()
    origin = complex(float(origin_parts[1]), float(origin_parts[2]))
    h = float(lines[2].split()[1])
    width, height = (int(x) for x in lines[3].split()[1:3])
    mask = np.zeros((height, width), dtype=bool)
    for iy in range(height):
        runs = [int(x) for x in lines[4 + iy].split()]
        x = 0
        value = False
        for run in runs:
            if value:
                mask[iy, x:x + run] = True
            x += run
            value = not value
        if x != width:
            raise DomainError(f"row {iy} encodes {x} cells, expected {width}")
    return GridRegion(origin, h, mask)
