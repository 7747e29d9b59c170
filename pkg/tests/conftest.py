import numpy as np
import pytest

from cfselect import RingId
from cfselect.rings import embed_coords

RINGS = (RingId.GAUSSIAN, RingId.EISENSTEIN)


@pytest.fixture(params=RINGS, ids=[r.value for r in RINGS])
def ring(request):
    return request.param


def lattice_coords_in_box(ring, bound):
    """All integer coordinate pairs whose embedding can fall in a disc of
    radius `bound` around the origin (superset box)."""
    if ring is RingId.GAUSSIAN:
        b1 = b2 = int(np.ceil(bound))
    else:
        b1 = int(np.ceil(bound * (1 + 1 / np.sqrt(3))))
        b2 = int(np.ceil(2 * bound / np.sqrt(3)))
    c1, c2 = np.meshgrid(np.arange(-b1, b1 + 1), np.arange(-b2, b2 + 1), indexing="ij")
    return np.stack([c1.ravel(), c2.ravel()], axis=1)


def brute_nearest(ring, z, search_radius=3.0):
    """Independent nearest-point oracle: exhaustive scan of all lattice
    points within `search_radius` of z."""
    coords = lattice_coords_in_box(ring, abs(z) + search_radius + 1)
    emb = embed_coords(ring, coords)
    d = np.abs(emb - z)
    keep = d <= search_radius
    coords, d = coords[keep], d[keep]
    j = int(np.argmin(d))
    return coords[j], float(d[j])
