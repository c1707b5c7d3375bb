"""Maps between localities: homomorphisms, isomorphisms, automorphisms,
and extending a homomorphism from a restriction to the whole locality.

A map alpha between partial groups is a homomorphism if it sends domain
words to domain words and commutes with the products.  For localities,
whose domains are cut out by chains of objects, the full quantifier over
words of every length reduces to a finite certificate:

  (1) every object maps into an object of the target,
  (2) conjugation is compatible on each S_f, and
  (3) length-two products are preserved.

Given (1) and (2), any domain word w with chain P_0, ..., P_n maps to a
word with chain P_0 alpha, ..., P_n alpha, so w alpha* lies in the target
domain; the product identity then follows by induction on the length of
the left fold, using (3) and the fact that S_w is contained in S of the
folded product.  Everything below leans on that reduction.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .fusion import fusion_from_locality
from .groups import TableGroup, automorphisms
from .locality import Locality
from .partial import Word


class ExtensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# homomorphism and isomorphism certificates


def hom_defect(src: Locality, dst: Locality, alpha: Sequence[int]) -> str | None:
    """Why alpha fails to be a homomorphism of partial groups; None if it is.

    Checks the finite certificate described in the module docstring.
    """
    spg, dpg = src.pg, dst.pg
    if len(alpha) != spg.size:
        return "map is not defined on every element"
    if any(not 0 <= g < dpg.size for g in alpha):
        return "map leaves the target"
    for P in spg.objects:
        img = frozenset(alpha[x] for x in P)
        if img not in dpg.object_set:
            return f"object {sorted(P)} does not map onto an object"
    for f in range(spg.size):
        cf = spg.conj_maps[f]
        cg = dpg.conj_maps[alpha[f]]
        for x, y in cf.items():
            if alpha[x] not in cg:
                return (f"image of {spg.labels[x]} escapes the conjugation "
                        f"domain of the image of {spg.labels[f]}")
            if cg[alpha[x]] != alpha[y]:
                return (f"conjugation of {spg.labels[x]} by {spg.labels[f]} "
                        "is not preserved")
    for (a, b), c in spg.pairs.items():
        d = dpg.pair(alpha[a], alpha[b])
        if d is None:
            return (f"product ({spg.labels[a]}, {spg.labels[b]}) maps outside "
                    "the target domain")
        if d != alpha[c]:
            return (f"product ({spg.labels[a]}, {spg.labels[b]}) is not "
                    "preserved")
    return None


def _objects_image(src: Locality, alpha: Sequence[int]) -> set[frozenset[int]]:
    return {frozenset(alpha[x] for x in P) for P in src.objects}


def iso_defect(src: Locality, dst: Locality, alpha: Sequence[int]) -> str | None:
    """Why alpha fails to be an isomorphism of localities; None if it is one.

    An isomorphism is a bijective map that is a homomorphism in both
    directions and matches the object families.
    """
    if len(set(alpha)) != len(alpha) or len(alpha) != dst.size:
        return "map is not a bijection"
    defect = hom_defect(src, dst, alpha)
    if defect is not None:
        return defect
    inverse = [0] * dst.size
    for f, g in enumerate(alpha):
        inverse[g] = f
    defect = hom_defect(dst, src, inverse)
    if defect is not None:
        return "inverse map: " + defect
    if _objects_image(src, alpha) != set(dst.object_set):
        return "object family is not mapped onto the target object family"
    return None


def projection_defect(src: Locality, dst: Locality,
                      alpha: Sequence[int]) -> str | None:
    """Why alpha fails to be a projection of localities; None if it is one.

    A projection is a surjective homomorphism whose induced word map is
    onto the target domain and which maps the object family onto the
    target object family.  Ontoness of the word map is certified by
    pointed lifting: for every target element g and every source object
    P whose image lies in the conjugation domain of g, some preimage of
    g must carry P.  A target domain word then lifts chainwise: starting
    from a source object over the head of its chain, each step lifts
    through the object reached so far, the source chain threads through
    objects, and the tracked S-set of the lifted word contains an object
    and so is an object itself.
    """
    defect = hom_defect(src, dst, alpha)
    if defect is not None:
        return defect
    if set(alpha) != set(range(dst.size)):
        return "map is not surjective"
    if _objects_image(src, alpha) != set(dst.object_set):
        return "object family is not mapped onto the target object family"
    fibers: dict[int, list[int]] = {}
    for f, g in enumerate(alpha):
        fibers.setdefault(g, []).append(f)
    objs = sorted(src.objects, key=lambda P: (len(P), sorted(P)))
    img_of = {P: frozenset(alpha[x] for x in P) for P in objs}
    for g in range(dst.size):
        dom = dst.pg.s_f(g)
        for P in objs:
            if img_of[P] <= dom:
                if not any(P <= src.pg.s_f(f) for f in fibers[g]):
                    return (f"no preimage of {dst.pg.labels[g]} carries the "
                            f"object {sorted(P)}")
    return None


def kernel_of(src: Locality, alpha: Sequence[int], dst: Locality) -> frozenset[int]:
    return frozenset(f for f in range(src.size) if alpha[f] == dst.pg.identity)


# ---------------------------------------------------------------------------
# enumerating homomorphisms and automorphisms by backtracking


def _conj_candidates(src: Locality, dst: Locality,
                     pinned: dict[int, int], f: int) -> list[int]:
    """Target elements compatible with f under conjugation on S_f.

    Assumes every member of S is already pinned.
    """
    cf = src.pg.conj_maps[f]
    pat = [(pinned[x], pinned[y]) for x, y in cf.items()]
    out = []
    for g in range(dst.size):
        cg = dst.pg.conj_maps[g]
        if all(x in cg and cg[x] == y for x, y in pat):
            out.append(g)
    return out


def hom_completions(src: Locality, dst: Locality, pinned: dict[int, int],
                    cap: int = 100000) -> list[tuple[int, ...]]:
    """All homomorphisms of partial groups src -> dst extending `pinned`,
    by exhaustive backtracking.

    `pinned` must cover S and map objects into objects; the enumeration
    then closes over the two finite certificate conditions, so the result
    is exactly the set of extensions.  Deterministic order.
    """
    spg, dpg = src.pg, dst.pg
    if not set(spg.s_members) <= set(pinned):
        raise ExtensionError("all of S must be pinned")
    for P in spg.objects:
        if frozenset(pinned[x] for x in P) not in dpg.object_set:
            raise ExtensionError("pinned part does not map objects to objects")

    free = [f for f in range(spg.size) if f not in pinned]
    cands = {f: _conj_candidates(src, dst, pinned, f) for f in free}
    free.sort(key=lambda f: (len(cands[f]), f))

    pair_items = list(spg.pairs.items())
    results: list[tuple[int, ...]] = []
    assign = dict(pinned)

    def consistent(f: int) -> bool:
        for (a, b), c in spg.pairs.items():
            if f not in (a, b, c):
                continue
            if a in assign and b in assign:
                d = dpg.pair(assign[a], assign[b])
                if d is None:
                    return False
                if c in assign and d != assign[c]:
                    return False
        return True

    def rec(i: int) -> None:
        if len(results) >= cap:
            return
        if i == len(free):
            full = tuple(assign[f] for f in range(spg.size))
            if hom_defect(src, dst, full) is None:
                results.append(full)
            return
        f = free[i]
        for g in cands[f]:
            assign[f] = g
            if consistent(f):
                rec(i + 1)
            del assign[f]

    rec(0)
    if len(results) >= cap:
        raise ExtensionError("completion search hit the cap")
    return sorted(results)


def locality_automorphisms(loc: Locality) -> list[tuple[int, ...]]:
    """All automorphisms of the locality, as image tuples.

    The restriction to S must be an automorphism of S preserving the
    object family; each such candidate is extended over the rest of the
    carrier by backtracking and kept when the isomorphism certificate
    passes.
    """
    pg = loc.pg
    s_sorted = tuple(sorted(pg.s_members))
    sg = loc.s_group()
    out: list[tuple[int, ...]] = []
    for a in automorphisms(sg):
        alpha_s = {sg.tokens[i]: sg.tokens[a[i]] for i in range(sg.order)}
        if {frozenset(alpha_s[x] for x in P) for P in pg.objects} \
                != set(pg.object_set):
            continue
        for full in hom_completions(loc, loc, alpha_s):
            if iso_defect(loc, loc, full) is None:
                out.append(full)
    return sorted(set(out))


def rigid_automorphisms(loc: Locality) -> list[tuple[int, ...]]:
    """Automorphisms restricting to the identity on S."""
    pinned = {x: x for x in loc.pg.s_members}
    out = [full for full in hom_completions(loc, loc, pinned)
           if iso_defect(loc, loc, full) is None]
    return sorted(set(out))


def compose_maps(first: Sequence[int], second: Sequence[int]) -> tuple[int, ...]:
    """Apply first, then second."""
    return tuple(second[g] for g in first)


def automorphism_group(loc: Locality) -> TableGroup:
    auts = locality_automorphisms(loc)
    return TableGroup(auts, compose_maps, label_fn=lambda t: str(t))


# ---------------------------------------------------------------------------
# restriction of automorphisms


def restrict_automorphism(plus: Locality, restr: Locality,
                          alpha: Sequence[int]) -> tuple[int, ...]:
    """Restriction of an automorphism of the larger locality to a
    restriction locality (indices of `restr`)."""
    if restr.parent is not plus:
        raise ExtensionError("second locality is not a restriction of the first")
    pi = restr.parent_index
    back = {p: i for i, p in enumerate(pi)}
    try:
        return tuple(back[alpha[pi[i]]] for i in range(restr.size))
    except KeyError:
        raise ExtensionError("automorphism does not preserve the restriction")


def aut_restriction_report(plus: Locality, restr: Locality) -> dict:
    """Compare Aut of a locality with Aut of its restriction.

    Returns a dict with the two automorphism lists, the restriction map,
    and flags for it being defined everywhere, injective, surjective and
    multiplicative.
    """
    aut_plus = locality_automorphisms(plus)
    aut_small = locality_automorphisms(restr)
    images = []
    defined = True
    for a in aut_plus:
        try:
            images.append(restrict_automorphism(plus, restr, a))
        except ExtensionError:
            defined = False
            images.append(None)
    image_set = {im for im in images if im is not None}
    multiplicative = True
    if defined:
        for a, ia in zip(aut_plus, images):
            for b, ib in zip(aut_plus, images):
                ab = compose_maps(a, b)
                if restrict_automorphism(plus, restr, ab) != compose_maps(ia, ib):
                    multiplicative = False
    return {
        "aut_plus": aut_plus,
        "aut": aut_small,
        "images": images,
        "defined": defined,
        "injective": len(image_set) == len(aut_plus) and defined,
        "surjective": image_set == set(aut_small),
        "multiplicative": multiplicative,
    }


# ---------------------------------------------------------------------------
# extending a homomorphism from a restriction


def _parent_objects(restr: Locality) -> set[frozenset[int]]:
    pi = restr.parent_index
    return {frozenset(pi[x] for x in P) for P in restr.objects}


def extend_hom(restr: Locality, tilde: Locality, alpha: Sequence[int],
               alpha_q: dict[frozenset[int], dict[int, int]] | None = None,
               ) -> tuple[int, ...]:
    """Extend a homomorphism off a restriction to the whole locality.

    restr is a restriction of its parent locality L+ with object family
    D inside the parent family D+, alpha: restr -> tilde a homomorphism
    of partial groups whose object images (for all of D+) are objects of
    tilde.  Hypotheses checked here:

      * the normalizer in S of every object in D+ \\ D lies in D;
      * alpha passes the homomorphism certificate;
      * every D+ object maps into the object family of tilde.

    For every missing object class a fully normalized representative Q
    is fixed.  When `alpha_q` is given it must map each representative Q
    (as a frozenset of parent indices) to a group homomorphism from the
    parent normalizer of Q into the tilde normalizer of its image,
    agreeing with alpha on the part inside the restriction; otherwise
    the parent normalizers must lie inside the restriction and alpha
    itself is used.

    The extension gamma is assembled elementwise: f with S_f = P outside
    D is written as a product h_P * g * h_{P^f}^(-1) with g normalizing
    Q, and the image is the corresponding product of images.  The result
    is certified and returned as a tuple over parent indices; it is the
    unique homomorphism extension, which `hom_completions` can confirm
    independently.
    """
    plus = restr.parent
    if plus is None:
        raise ExtensionError("first locality is not a restriction")
    ppg, tpg = plus.pg, tilde.pg
    pi = restr.parent_index
    back = {p: i for i, p in enumerate(pi)}

    if len(alpha) != restr.size:
        raise ExtensionError("alpha must be defined on the restriction")
    defect = hom_defect(restr, tilde, alpha)
    if defect is not None:
        raise ExtensionError("alpha is not a homomorphism: " + defect)

    delta = _parent_objects(restr)
    delta_plus = set(ppg.object_set)
    if not delta <= delta_plus:
        raise ExtensionError("restriction objects are not parent objects")
    missing = sorted(delta_plus - delta, key=lambda P: (len(P), sorted(P)))

    def alpha_parent(x: int) -> int:
        if x not in back:
            raise ExtensionError("alpha is needed outside the restriction")
        return alpha[back[x]]

    def image_set(P: Iterable[int]) -> frozenset[int]:
        return frozenset(alpha_parent(x) for x in P)

    for P in sorted(delta_plus, key=lambda P: (len(P), sorted(P))):
        if image_set(P) not in tpg.object_set:
            raise ExtensionError(f"object {sorted(P)} does not map into the "
                                 "target object family")

    s_set = set(ppg.s_members)
    n_s_of: dict[frozenset[int], frozenset[int]] = {}
    for P in missing:
        ns = frozenset(x for x in s_set
                       if {ppg.conj_maps[x][y] for y in P} == set(P))
        n_s_of[P] = ns
        if ns not in delta:
            raise ExtensionError(f"normalizer in S of {sorted(P)} is not an "
                                 "object of the restriction")

    # fully normalized class representatives among the missing objects
    fus = fusion_from_locality(plus)
    rep_of: dict[frozenset[int], frozenset[int]] = {}
    reps: list[frozenset[int]] = []
    for P in missing:
        cls = fus.conjugacy_class(tuple(sorted(P)))
        if any(frozenset(Q) not in delta_plus - delta for Q in cls):
            raise ExtensionError("missing objects are not closed under fusion")
        best = max(len(fus.n_s(Q)) for Q in cls)
        rep = next(frozenset(Q) for Q in cls if len(fus.n_s(Q)) == best)
        rep_of[P] = rep
        if rep not in reps:
            reps.append(rep)

    # normalizer maps on the representatives
    maps: dict[frozenset[int], dict[int, int]] = {}
    for Q in reps:
        n_plus = plus.n_of(Q)
        n_inner = [f for f in n_plus if ppg.s_f(f) in delta]
        q_img = image_set(Q)
        n_tilde = set(tilde.n_of(q_img))
        if alpha_q is not None and Q in alpha_q:
            amap = dict(alpha_q[Q])
        else:
            if set(n_plus) - set(n_inner):
                raise ExtensionError(
                    "normalizer of a representative leaves the restriction; "
                    "an explicit normalizer map is required")
            amap = {f: alpha_parent(f) for f in n_plus}
        if set(amap) != set(n_plus):
            raise ExtensionError("normalizer map has the wrong domain")
        if not set(amap.values()) <= n_tilde:
            raise ExtensionError("normalizer map leaves the image normalizer")
        for f in n_inner:
            if amap[f] != alpha_parent(f):
                raise ExtensionError("normalizer map disagrees with alpha")
        for a in n_plus:
            for b in n_plus:
                c = ppg.pair(a, b)
                d = tpg.pair(amap[a], amap[b])
                if c is None or d is None or d != amap[c]:
                    raise ExtensionError("normalizer map is not a group "
                                         "homomorphism")
        maps[Q] = amap

    # transporter elements h_P moving each missing object to its representative
    h_of: dict[frozenset[int], int] = {}
    for P in missing:
        ns = n_s_of[P]
        cands = [h for h in plus.transporter_elements(ns, ppg.s_members)
                 if frozenset(ppg.conj_maps[h][x] for x in P) == rep_of[P]]
        if not cands:
            raise ExtensionError(f"no transporter moves {sorted(P)} to its "
                                 "fully normalized representative")
        h_of[P] = min(cands)

    gamma = [0] * ppg.size
    for f in range(ppg.size):
        sf = ppg.s_f(f)
        if sf in delta:
            gamma[f] = alpha[back[f]]
            continue
        P = sf
        pf = frozenset(ppg.conj_maps[f][x] for x in P)
        Q = rep_of[P]
        if rep_of.get(pf) != Q:
            raise ExtensionError("element conjugates an object out of its "
                                 "fusion class")
        h1, h2 = h_of[P], h_of[pf]
        word = (ppg.inv[h1], f, h2)
        if not ppg.word_in_domain(word):
            raise ExtensionError("internal: conjugating word left the domain")
        g = ppg.product(word)
        if g not in maps[Q]:
            raise ExtensionError("internal: middle factor does not normalize "
                                 "the representative")
        t_word = (alpha_parent(h1), maps[Q][g], tpg.inv[alpha_parent(h2)])
        if not tpg.word_in_domain(t_word):
            raise ExtensionError("internal: image word left the target domain")
        gamma[f] = tpg.product(t_word)

    out = tuple(gamma)
    defect = hom_defect(plus, tilde, out)
    if defect is not None:
        raise ExtensionError("internal: assembled extension is not a "
                             "homomorphism: " + defect)
    for i, p in enumerate(pi):
        if out[p] != alpha[i]:
            raise ExtensionError("internal: extension does not restrict to "
                                 "alpha")
    return out
