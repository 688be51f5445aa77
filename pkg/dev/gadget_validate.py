"""Full gadget contract sweep: every kind at every leaf-arc of every
reduced element with <= 5 leaves.  Deltas measured by transporting the
host's canonical orientation through the returned certificate."""

import sys
import time

sys.path.insert(0, "src")

from thompson_links import errors
from thompson_links.construction import in_oriented_subgroup, link_of
from thompson_links.diagram import canonical_orientation
from thompson_links.gadgets import (
    ORIENTED_KINDS,
    GadgetKind,
    gadget_delta,
    insert_gadget,
    leaf_arc_component,
    leaf_arc_direction,
)
from thompson_links.invariants import wcu, whitney_index
from thompson_links.moves import MoveCertificate, replay_certificate
from thompson_links.trees import enumerate_elements

t0 = time.time()
checked = 0
hosts = 0
bad = []
dir_counts = {"up": 0, "down": 0}

for g in enumerate_elements(5):
    n = g.leaf_count
    if n == 1:
        for kind in GadgetKind:
            try:
                insert_gadget(g, 0, kind)
                bad.append(("identity accepted", kind))
            except errors.NotALeafArc:
                pass
        continue
    hosts += 1
    d1 = link_of(g)
    od1 = canonical_orientation(d1)
    w1 = wcu(od1)
    om1 = [whitney_index(od1, i) for i in range(len(d1.components()))]
    invec = in_oriented_subgroup(g)
    for leaf in range(n):
        dirn = leaf_arc_direction(d1, leaf, od1)
        dir_counts[dirn] += 1
        comp = leaf_arc_component(d1, leaf)
        for kind in GadgetKind:
            if kind in ORIENTED_KINDS and not invec:
                try:
                    insert_gadget(g, leaf, kind)
                    bad.append((str(g.top), leaf, kind, "NotOriented not raised"))
                except errors.NotOriented:
                    pass
                continue
            g2, cert = insert_gadget(g, leaf, kind)
            fin, od2, total = replay_certificate(d1, cert, od1)
            w2 = wcu(od2)
            deltas = {}
            for i in range(len(d1.components())):
                j = total[i]
                dw = w2[j][0] - w1[i][0]
                dom = whitney_index(od2, j) - om1[i]
                deltas[i] = (dw, dom)
            expect = gadget_delta(kind, dirn)
            ok = deltas[comp] == expect and all(
                v == (0, 0) for i, v in deltas.items() if i != comp
            )
            if kind in ORIENTED_KINDS and not in_oriented_subgroup(g2):
                ok = False
            # json roundtrip must replay identically
            rt = MoveCertificate.from_json(cert.to_json())
            if rt != cert:
                ok = False
            if not ok:
                bad.append((f"{g.top}|{g.bottom}", leaf, kind.value, dirn, deltas, expect))
            checked += 1

print(f"hosts={hosts} insertions={checked} directions={dir_counts} elapsed={time.time()-t0:.1f}s")
if bad:
    print(f"FAILURES: {len(bad)}")
    for b in bad[:20]:
        print("  ", b)
else:
    print("all contracts hold")
