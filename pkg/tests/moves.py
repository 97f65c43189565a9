"""Random planar Reidemeister sequences driven by hypothesis."""

from hypothesis import strategies as st

from linklab.diagram import DiagramError, r1_delete, r1_insert, r2_delete, r2_insert, r2_sites, r3_move, r3_sites
from linklab.kirby import is_planar


def _try(fn, *args):
    try:
        out = fn(*args)
    except DiagramError:
        return None
    return out if is_planar(out) else None


def random_move(data, d):
    """One move on ``d`` or ``d`` itself if the drawn move does not apply."""
    kind = data.draw(st.sampled_from(["r1", "r1-", "r2", "r2-", "r3"]))
    labels = d.labels
    if kind == "r1":
        lab = data.draw(st.sampled_from(labels))
        pos = data.draw(st.integers(0, len(d.components[d.index(lab)].passages)))
        out = _try(r1_insert, d, lab, pos, data.draw(st.sampled_from([1, -1])), data.draw(st.booleans()))
    elif kind == "r2":
        a, b = data.draw(st.sampled_from(labels)), data.draw(st.sampled_from(labels))
        pa = data.draw(st.integers(0, len(d.components[d.index(a)].passages)))
        pb = data.draw(st.integers(0, len(d.components[d.index(b)].passages)))
        out = None
        for sign in (1, -1):
            for rev in (False, True):
                out = out or _try(r2_insert, d, a, pa, b, pb, sign, rev)
    elif kind == "r1-":
        info = d.crossings()
        kinks = [x for x, i in info.items() if i.over[0] == i.under[0]]
        out = _try(r1_delete, d, data.draw(st.sampled_from(kinks))) if kinks else None
    elif kind == "r2-":
        sites = r2_sites(d)
        out = _try(r2_delete, d, *data.draw(st.sampled_from(sites))) if sites else None
    else:
        sites = r3_sites(d)
        out = _try(r3_move, d, data.draw(st.sampled_from(sites))) if sites else None
    return d if out is None else out


def random_sequence(data, d, max_steps=6):
    for _ in range(data.draw(st.integers(1, max_steps))):
        d = random_move(data, d)
    return d
