"""Independent reference implementations used to check the package.

None of these import the code under test; they recompute the same
quantities the slow, obvious way.
"""

from __future__ import annotations

import math

R_KM = 6371.0


def chord_distance_km(a, b):
    """Great-circle distance via the 3-D chord between unit vectors."""
    def vec(p):
        lat, lon = math.radians(p[0]), math.radians(p[1])
        return (math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat))
    va, vb = vec(a), vec(b)
    chord = math.sqrt(sum((x - y) ** 2 for x, y in zip(va, vb)))
    return 2.0 * R_KM * math.asin(min(1.0, chord / 2.0))


def brute_force_split(nodes, ways):
    """Split ``ways`` ([(way_id, refs, tag)]) at shared nodes.

    A node is a junction if, scanning every way position by position, it is
    seen at two or more positions (the closing node of a ring counts once).
    Returns sorted ``(first, last, tag, refs)`` tuples, one per segment.
    """
    def occurrences(node):
        n = 0
        for _, refs, _ in ways:
            positions = refs[:-1] if refs[0] == refs[-1] else refs
            for r in positions:
                if r == node:
                    n += 1
        return n

    segments = []
    for _, refs, tag in ways:
        current = [refs[0]]
        for i in range(1, len(refs)):
            current.append(refs[i])
            last = i == len(refs) - 1
            if last or occurrences(refs[i]) >= 2:
                segments.append((current[0], current[-1], tag, tuple(current)))
                current = [refs[i]]
    return sorted(segments)


def chain_length_km(nodes, refs):
    return sum(chord_distance_km(nodes[a], nodes[b]) for a, b in zip(refs, refs[1:]))


def window_counts(times, m, n, horizon):
    """Count scheduled times per window by direct bucketing.

    Returns (per-window counts for full windows, expected total).
    """
    full = 0
    while (full + 1) * n <= horizon * (1 + 1e-12):
        full += 1
    counts = [0] * full
    tail = 0
    for t in times:
        assert 0 <= t < horizon or (t == 0 and horizon == 0)
        k = int(t // n)
        # align with window edges computed as k * n, not with float division
        while (k + 1) * n <= t:
            k += 1
        while k > 0 and k * n > t:
            k -= 1
        if k < full:
            counts[k] += 1
        else:
            tail += 1
    rest = horizon - full * n
    expected_tail = int(m * rest / n + 1e-9) if rest > 1e-12 else 0
    return counts, tail, expected_tail
