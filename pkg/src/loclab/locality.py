"""Localities: partial groups whose domain is steered by a family of objects.

A locality is a triple (L, Delta, S) where L is a partial group, S is a
maximal p-subgroup, and Delta is a collection of subgroups of S, closed
under L-conjugation inside S and under passing to overgroups in S, such
that a word lies in the domain of the product exactly when it can be
threaded through Delta: there are objects P_0, ..., P_n with
P_{i-1}^{f_i} = P_i for every letter f_i of the word.

The standard source of examples is a finite group M with Sylow p-subgroup
S and a suitable family Gamma: the subset

    L_Gamma(M) = {g in M : S meet S^g in Gamma}

inherits a partial product from M (defined on the Gamma-threaded words)
and `locality_from_group` builds exactly this.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .groups import (
    FiniteGroup,
    Subgroup,
    TableGroup,
    _p_part,
    is_p_group,
    subgroup_closure,
    subgroup_lattice,
    subgroup_view,
    sylow_p,
)
from .partial import (
    CheckFailure,
    MAX_FAILURES,
    PartialGroup,
    UndefinedProductError,
    ValidationReport,
    Word,
    subgroup_table_group,
    validate_partial_group,
)


class LocalityBuildError(ValueError):
    """The supplied data does not assemble into a locality."""


def canonical_objects(objects: Iterable[Iterable[int]]) -> tuple[frozenset[int], ...]:
    """Deduplicate and sort an object family (by order, then members)."""
    objs = {frozenset(o) for o in objects}
    return tuple(sorted(objs, key=lambda P: (len(P), tuple(sorted(P)))))


class ChainPartialGroup(PartialGroup):
    """Partial group with domain given by conjugation chains through objects.

    Elements are indices 0..n-1.  The data is: the bare pair table, one
    conjugation map per element f (a dict on S_f = {x in S : x^f in S}),
    the members of S and the object family.  A word w = (f_1, ..., f_n)
    is in the domain when S_w, the set of x in S whose successive images
    under the maps stay in S throughout, is itself an object.
    """

    def __init__(self, labels: Sequence[str], inv: Sequence[int], identity: int,
                 pair_table: dict[tuple[int, int], int],
                 conj_maps: Sequence[dict[int, int]],
                 s_members: Iterable[int],
                 objects: Iterable[Iterable[int]]):
        super().__init__(labels, inv, identity)
        self.pairs = dict(pair_table)
        self.conj_maps = tuple(dict(m) for m in conj_maps)
        self.s_members = frozenset(s_members)
        self.objects = canonical_objects(objects)
        self.object_set = set(self.objects)
        self._sf = tuple(frozenset(m) for m in self.conj_maps)
        self.is_full_domain = self._prove_full_domain()
        if self.is_full_domain and len(self.pairs) != self.size * self.size:
            raise LocalityBuildError("domain proof contradicts the pair table")

    # -- the domain ---------------------------------------------------------

    def s_f(self, f: int) -> frozenset[int]:
        return self._sf[f]

    def s_of_word(self, w: Word) -> frozenset[int]:
        """S_w = {x in S : all successive conjugates along w stay in S}."""
        cur = {x: x for x in self.s_members}
        for f in w:
            conj = self.conj_maps[f]
            cur = {x: conj[img] for x, img in cur.items() if img in conj}
        return frozenset(cur)

    def word_in_domain(self, w: Word) -> bool:
        return self.s_of_word(w) in self.object_set

    def pair(self, i: int, j: int) -> int | None:
        return self.pairs.get((i, j))

    def iter_domain_words(self, k: int) -> Iterator[Word]:
        """Walk D depth-first.  Extensions of a word are pruned once the
        tracked S_w leaves the object family; on a valid locality this is
        exact because the domain is closed under taking subwords."""
        base = {x: x for x in self.s_members}
        if frozenset(base) not in self.object_set:
            return
        yield ()

        def rec(word: Word, state: dict[int, int]) -> Iterator[Word]:
            if len(word) == k:
                return
            for f in range(self.size):
                conj = self.conj_maps[f]
                nxt = {x: conj[img] for x, img in state.items() if img in conj}
                if frozenset(nxt) in self.object_set:
                    w2 = word + (f,)
                    yield w2
                    yield from rec(w2, nxt)

        yield from rec((), base)

    def domain_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    # -- full-domain certificate ---------------------------------------------

    def _prove_full_domain(self) -> bool:
        """If K = meet of all S_f is an object fixed by every conjugation
        map, then (K, K, ..., K) threads every word, so D is all of W(L)."""
        if not self.size:
            return False
        k = set(self.s_members)
        for dom in self._sf:
            k &= dom
        kf = frozenset(k)
        if kf not in self.object_set:
            return False
        for conj in self.conj_maps:
            if {conj[x] for x in kf} != k:
                return False
        return True


@dataclass(frozen=True)
class DomainWitness:
    """Outcome of a domain test on one word, with the threading chain."""
    word: Word
    in_domain: bool
    s_w: frozenset[int]
    chain: tuple[frozenset[int], ...] | None


class Locality:
    """A partial group together with a prime, S and the object family."""

    def __init__(self, pg: ChainPartialGroup, p: int, *,
                 ambient: FiniteGroup | None = None,
                 carrier: tuple[int, ...] | None = None,
                 parent: "Locality | None" = None,
                 parent_index: tuple[int, ...] | None = None):
        self.pg = pg
        self.p = p
        self.s = pg.s_members
        self.objects = pg.objects
        self.object_set = pg.object_set
        self.ambient = ambient
        self.carrier = carrier
        self.parent = parent
        self.parent_index = parent_index
        self._s_group: TableGroup | None = None

    # -- basics ---------------------------------------------------------------

    @property
    def size(self) -> int:
        return self.pg.size

    @property
    def proven_full(self) -> bool:
        return self.pg.is_full_domain

    def label(self, f: int) -> str:
        return self.pg.labels[f]

    def element(self, label: str) -> int:
        return self.pg.index_of(label)

    def is_object(self, P: Iterable[int]) -> bool:
        return frozenset(P) in self.object_set

    def s_f(self, f: int) -> frozenset[int]:
        return self.pg.s_f(f)

    def s_w(self, w: Word) -> frozenset[int]:
        return self.pg.s_of_word(w)

    # -- conjugation ------------------------------------------------------------

    def conj_element(self, x: int, f: int) -> int | None:
        return self.pg.conj_maps[f].get(x)

    def conj_subgroup(self, P: Iterable[int], f: int) -> frozenset[int]:
        conj = self.pg.conj_maps[f]
        pset = frozenset(P)
        if not pset <= self.pg.s_f(f):
            raise UndefinedProductError((f,), "subgroup leaves the conjugation domain")
        return frozenset(conj[x] for x in pset)

    def transporter_elements(self, P: Iterable[int], Q: Iterable[int]) -> tuple[int, ...]:
        """N_L(P, Q) = {f : P <= S_f and P^f <= Q}."""
        pset, qset = frozenset(P), frozenset(Q)
        out = []
        for f in range(self.size):
            if pset <= self.pg.s_f(f):
                conj = self.pg.conj_maps[f]
                if all(conj[x] in qset for x in pset):
                    out.append(f)
        return tuple(out)

    def n_of(self, P: Iterable[int]) -> tuple[int, ...]:
        """N_L(P) = {f : P <= S_f and P^f = P}."""
        pset = frozenset(P)
        out = []
        for f in range(self.size):
            if pset <= self.pg.s_f(f):
                conj = self.pg.conj_maps[f]
                if frozenset(conj[x] for x in pset) == pset:
                    out.append(f)
        return tuple(out)

    def n_group(self, P: Iterable[int]) -> TableGroup:
        """N_L(P) with the induced product; raises if a product is missing."""
        return subgroup_table_group(self.pg, self.n_of(P))

    def s_group(self) -> TableGroup:
        if self._s_group is None:
            self._s_group = subgroup_table_group(self.pg, sorted(self.s))
        return self._s_group

    def s_overgroups(self, P: Iterable[int]) -> list[frozenset[int]]:
        """All subgroups Q with P <= Q <= S, via the lattice of S."""
        sg = self.s_group()
        pos = {sg.tokens[i]: i for i in range(sg.order)}
        pset = frozenset(pos[x] for x in P)
        out = []
        for sub in subgroup_lattice(sg):
            mem = frozenset(sub.members)
            if pset <= mem:
                out.append(frozenset(sg.tokens[i] for i in mem))
        return out

    # -- the domain, with witnesses ------------------------------------------------

    def word_domain_check(self, w: Word) -> DomainWitness:
        s_w = self.pg.s_of_word(w)
        if s_w not in self.object_set:
            return DomainWitness(tuple(w), False, s_w, None)
        chain = [s_w]
        cur = s_w
        for f in w:
            conj = self.pg.conj_maps[f]
            cur = frozenset(conj[x] for x in cur)
            chain.append(cur)
        return DomainWitness(tuple(w), True, s_w, tuple(chain))


# ---------------------------------------------------------------------------
# building L_Gamma(M) from a finite group


def _subgroups_of_view(group: FiniteGroup, s_members: Iterable[int]) -> list[frozenset[int]]:
    """All subgroups of <s_members>, as frozensets of `group` indices."""
    view = subgroup_view(group, s_members)
    out = []
    for sub in subgroup_lattice(view):
        out.append(frozenset(view.tokens[i] for i in sub.members))
    return out


def object_family_closure_defect(group: FiniteGroup, s_members: frozenset[int],
                                 objs: Sequence[frozenset[int]]) -> str | None:
    """Why `objs` fails to be closed (conjugation into S, overgroups in S),
    or None if it is closed."""
    objset = set(objs)
    subs_of_s = _subgroups_of_view(group, s_members)
    for P in objs:
        for g in group.indices():
            img = frozenset(group.conj(x, g) for x in P)
            if img <= s_members and img not in objset:
                return ("conjugate of an object lands in S but is not an object: "
                        f"{sorted(P)} ^ {group.label(g)}")
        for Q in subs_of_s:
            if P <= Q and Q not in objset:
                return (f"overgroup of an object is missing: {sorted(P)} <= {sorted(Q)}")
    return None


def close_object_family(group: FiniteGroup, s_members: frozenset[int],
                        seeds: Iterable[frozenset[int]]) -> tuple[frozenset[int], ...]:
    """Close seeds under conjugation into S and overgroups in S."""
    subs_of_s = _subgroups_of_view(group, s_members)
    pool = {frozenset(P) for P in seeds}
    while True:
        new: set[frozenset[int]] = set()
        for P in pool:
            for g in group.indices():
                img = frozenset(group.conj(x, g) for x in P)
                if img <= s_members and img not in pool:
                    new.add(img)
            for Q in subs_of_s:
                if P <= Q and Q not in pool:
                    new.add(Q)
        if not new:
            return canonical_objects(pool)
        pool |= new


def locality_from_group(group: FiniteGroup, p: int,
                        objects: Iterable[Iterable[int]], *,
                        auto_close: bool = False) -> Locality:
    """Build (L_Gamma(M), Gamma, S) for M = group and S its Sylow p-subgroup.

    `objects` lists subgroups of S by their members (group element indices).
    With auto_close=True the family is closed under conjugation into S and
    overgroups in S first; otherwise a family that is not closed is an error.
    """
    s_sub = sylow_p(group, p)
    s_amb = s_sub.member_set()
    fam: list[frozenset[int]] = []
    for o in objects:
        mem = frozenset(o.members if isinstance(o, Subgroup) else o)
        if not mem <= s_amb:
            raise LocalityBuildError(
                f"object {sorted(mem)} is not contained in the Sylow {p}-subgroup")
        if set(subgroup_closure(group, mem)) != mem:
            raise LocalityBuildError(f"object {sorted(mem)} is not a subgroup")
        fam.append(mem)
    if not fam:
        raise LocalityBuildError("the object family is empty")
    if auto_close:
        fam = list(close_object_family(group, s_amb, fam))
    else:
        defect = object_family_closure_defect(group, s_amb, fam)
        if defect is not None:
            raise LocalityBuildError(defect)
    objs = canonical_objects(fam)
    objset = set(objs)

    # carrier, by both characterizations
    car_meet = []
    for g in group.indices():
        ginv = group.inv(g)
        meet = frozenset(y for y in s_amb if group.conj(y, ginv) in s_amb)
        if meet in objset:
            car_meet.append(g)
    car_transport = []
    for g in group.indices():
        for P in objs:
            if all(group.conj(x, g) in s_amb for x in P):
                car_transport.append(g)
                break
    if car_meet != car_transport:
        raise LocalityBuildError(
            "internal: the two carrier characterizations disagree; "
            "the object family is not closed the way it should be")
    carrier = tuple(car_meet)
    pos = {amb: i for i, amb in enumerate(carrier)}
    for g in carrier:
        if group.inv(g) not in pos:
            raise LocalityBuildError("internal: carrier is not closed under inversion")

    labels = [group.label(g) for g in carrier]
    inverse = [pos[group.inv(g)] for g in carrier]
    identity = pos[group.identity]
    s_pg = frozenset(pos[x] for x in s_amb)
    objs_pg = [frozenset(pos[x] for x in P) for P in objs]
    objs_pg_set = set(objs_pg)

    conj_maps = []
    for g in carrier:
        m = {}
        for x in s_amb:
            y = group.conj(x, g)
            if y in s_amb:
                m[pos[x]] = pos[y]
        conj_maps.append(m)

    pair_table: dict[tuple[int, int], int] = {}
    for i in range(len(carrier)):
        ci = conj_maps[i]
        for j in range(len(carrier)):
            cj = conj_maps[j]
            s_w = frozenset(x for x, y in ci.items() if y in cj)
            if s_w in objs_pg_set:
                prod = group.mul(carrier[i], carrier[j])
                if prod not in pos:
                    raise LocalityBuildError("internal: a defined product leaves the carrier")
                pair_table[(i, j)] = pos[prod]

    pg = ChainPartialGroup(labels, inverse, identity, pair_table, conj_maps,
                           s_pg, objs_pg)
    return Locality(pg, p, ambient=group, carrier=carrier)


# ---------------------------------------------------------------------------
# restriction to a smaller object family


def restriction(loc: Locality, objects: Iterable[Iterable[int]]) -> Locality:
    """The restriction of a locality to a smaller object family.

    The family must be a nonempty subset of the objects, closed under
    conjugation and overgroups.  The new carrier is {f : S_f in the new
    family}; S_f of every surviving element is unchanged, which is
    asserted.
    """
    objs = canonical_objects(objects)
    objset = set(objs)
    pg = loc.pg
    if not objs:
        raise LocalityBuildError("the object family is empty")
    for P in objs:
        if P not in loc.object_set:
            raise LocalityBuildError(f"{sorted(P)} is not an object of the locality")
        for f in range(pg.size):
            if P <= pg.s_f(f):
                img = frozenset(pg.conj_maps[f][x] for x in P)
                if img not in objset:
                    raise LocalityBuildError(
                        f"family is not closed under conjugation: {sorted(P)} ^ {pg.labels[f]}")
        for Q in loc.objects:
            if P <= Q and Q not in objset:
                raise LocalityBuildError(
                    f"family is not closed under overgroups: {sorted(P)} <= {sorted(Q)}")

    keep = [f for f in range(pg.size) if pg.s_f(f) in objset]
    pos = {f: i for i, f in enumerate(keep)}
    for f in keep:
        if pg.inv[f] not in pos:
            raise LocalityBuildError("internal: restricted carrier not closed under inversion")

    labels = [pg.labels[f] for f in keep]
    inverse = [pos[pg.inv[f]] for f in keep]
    identity = pos[pg.identity]
    s_new = frozenset(pos[x] for x in pg.s_members)
    objs_new = [frozenset(pos[x] for x in P) for P in objs]
    conj_maps = []
    for f in keep:
        conj_maps.append({pos[x]: pos[y] for x, y in pg.conj_maps[f].items()})
    table: dict[tuple[int, int], int] = {}
    for i, f in enumerate(keep):
        ci = pg.conj_maps[f]
        for j, g in enumerate(keep):
            cj = pg.conj_maps[g]
            s_w = frozenset(x for x, y in ci.items() if y in cj)
            if s_w in objset:
                prod = pg.pair(f, g)
                if prod is None or prod not in pos:
                    raise LocalityBuildError("internal: restricted product missing or escaping")
                table[(i, j)] = pos[prod]

    new_pg = ChainPartialGroup(labels, inverse, identity, table, conj_maps,
                               s_new, objs_new)
    for i, f in enumerate(keep):
        if {pos[x] for x in pg.s_f(f)} != set(new_pg.s_f(i)):
            raise LocalityBuildError("internal: S_f changed under restriction")
    new_carrier = None
    if loc.carrier is not None:
        new_carrier = tuple(loc.carrier[f] for f in keep)
    return Locality(new_pg, loc.p, ambient=loc.ambient, carrier=new_carrier,
                    parent=loc, parent_index=tuple(keep))


# ---------------------------------------------------------------------------
# validation against the definition


@dataclass(frozen=True)
class LocalityCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class LocalityReport:
    ok: bool
    checks: tuple[LocalityCheck, ...]
    pg_report: ValidationReport

    def failing(self) -> list[LocalityCheck]:
        return [c for c in self.checks if not c.ok]

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            mark = "ok" if c.ok else "FAIL"
            line = f"[{mark}] {c.name}"
            if c.detail and not c.ok:
                line += f": {c.detail}"
            out.append(line)
        return out


def chain_domain_words(loc: Locality, k: int) -> Iterator[Word]:
    """Words of length <= k threaded through the objects, straight from the
    chain definition: track all objects reachable as the end of a chain."""
    yield ()
    pg = loc.pg
    start = set(loc.objects)

    def rec(word: Word, heads: set[frozenset[int]]) -> Iterator[Word]:
        if len(word) == k:
            return
        for f in range(pg.size):
            conj = pg.conj_maps[f]
            dom = pg.s_f(f)
            nxt = set()
            for P in heads:
                if P <= dom:
                    img = frozenset(conj[x] for x in P)
                    if img in loc.object_set:
                        nxt.add(img)
            if nxt:
                w2 = word + (f,)
                yield w2
                yield from rec(w2, nxt)

    yield from rec((), start)


def validate_locality(loc: Locality, k: int = 4) -> LocalityReport:
    """Check the definition: L is a partial group, S is a maximal p-subgroup,
    the objects are a closed family of subgroups of S, and the domain is
    exactly the set of Delta-threaded words (up to word length k)."""
    pg = loc.pg
    checks: list[LocalityCheck] = []

    pg_report = validate_partial_group(pg, k=k)
    detail = "; ".join(pg_report.witness_lines()[:MAX_FAILURES])
    checks.append(LocalityCheck("partial-group", pg_report.ok, detail))

    # S is a subgroup: every pair product inside S is defined and stays in S
    s_sorted = sorted(loc.s)
    s_ok, s_detail = True, ""
    for a in s_sorted:
        for b in s_sorted:
            c = pg.pair(a, b)
            if c is None or c not in loc.s:
                s_ok, s_detail = False, f"pair {pg.label_word((a, b))} undefined or outside S"
                break
        if not s_ok:
            break
    if s_ok:
        for a in s_sorted:
            if pg.inv[a] not in loc.s:
                s_ok, s_detail = False, f"inverse of {pg.labels[a]} leaves S"
                break
    checks.append(LocalityCheck("s-subgroup", s_ok, s_detail))

    # S is a p-group
    if s_ok:
        sg = loc.s_group()
        ok = is_p_group(sg, loc.p)
        checks.append(LocalityCheck("s-p-group", ok,
                                    "" if ok else f"|S| = {sg.order}"))
    else:
        checks.append(LocalityCheck("s-p-group", False, "S is not a subgroup"))

    # S is maximal: S is a Sylow p-subgroup of the group N_L(S).  A strictly
    # larger p-subgroup T would put N_T(S) > S inside N_L(S).
    max_ok, max_detail = True, ""
    try:
        ngrp = loc.n_group(loc.s)
        if _p_part(ngrp.order, loc.p) != len(loc.s):
            max_ok = False
            max_detail = f"|N_L(S)| = {ngrp.order} has p-part > |S| = {len(loc.s)}"
    except UndefinedProductError as err:
        max_ok, max_detail = False, f"N_L(S) is not a group: {err}"
    checks.append(LocalityCheck("s-maximal", max_ok, max_detail))

    # objects are subgroups of S
    obj_ok, obj_detail = True, ""
    for P in loc.objects:
        if not P <= loc.s:
            obj_ok, obj_detail = False, f"object {sorted(P)} is not inside S"
            break
        for a in P:
            if pg.inv[a] not in P:
                obj_ok, obj_detail = False, f"object {sorted(P)} not inverse-closed"
                break
            for b in P:
                c = pg.pair(a, b)
                if c is None or c not in P:
                    obj_ok, obj_detail = False, f"object {sorted(P)} not product-closed"
                    break
            if not obj_ok:
                break
        if not obj_ok:
            break
    checks.append(LocalityCheck("objects-subgroups", obj_ok, obj_detail))

    ok = bool(loc.objects) and loc.s in loc.object_set
    checks.append(LocalityCheck("objects-contain-s", ok,
                                "" if ok else "S itself must be an object"))

    # closure under conjugation
    conj_ok, conj_detail = True, ""
    for P in loc.objects:
        for f in range(pg.size):
            if P <= pg.s_f(f):
                img = frozenset(pg.conj_maps[f][x] for x in P)
                if img not in loc.object_set:
                    conj_ok = False
                    conj_detail = f"{sorted(P)} ^ {pg.labels[f]} is not an object"
                    break
        if not conj_ok:
            break
    checks.append(LocalityCheck("objects-conjugation-closed", conj_ok, conj_detail))

    # closure under overgroups
    over_ok, over_detail = True, ""
    if s_ok:
        for P in loc.objects:
            for Q in loc.s_overgroups(P):
                if Q not in loc.object_set:
                    over_ok = False
                    over_detail = f"overgroup {sorted(Q)} of {sorted(P)} is missing"
                    break
            if not over_ok:
                break
    else:
        over_ok, over_detail = False, "S is not a subgroup"
    checks.append(LocalityCheck("objects-overgroup-closed", over_ok, over_detail))

    # every element needs S_f in the family (length-1 words in D)
    elt_ok, elt_detail = True, ""
    for f in range(pg.size):
        if pg.s_f(f) not in loc.object_set:
            elt_ok, elt_detail = False, f"S_f of {pg.labels[f]} is not an object"
            break
    checks.append(LocalityCheck("elements-have-objects", elt_ok, elt_detail))

    # the pair table is exactly the length-2 part of the chain domain
    pair_ok, pair_detail = True, ""
    table_keys = set(pg.pairs)
    chase_keys = set()
    for a in range(pg.size):
        for b in range(pg.size):
            if pg.word_in_domain((a, b)):
                chase_keys.add((a, b))
    if table_keys != chase_keys:
        pair_ok = False
        diff = table_keys.symmetric_difference(chase_keys)
        w = next(iter(sorted(diff)))
        side = "table only" if w in table_keys else "domain only"
        pair_detail = f"pair {pg.label_word(w)} in {side}"
    checks.append(LocalityCheck("pair-table-matches-domain", pair_ok, pair_detail))

    # stored conjugation maps match the pair table route
    sf_ok, sf_detail = True, ""
    for f in range(pg.size):
        inv_f = pg.inv[f]
        derived = {}
        for x in sorted(loc.s):
            a = pg.pairs.get((inv_f, x))
            if a is None:
                continue
            b = pg.pairs.get((a, f))
            if b is None or b not in loc.s:
                continue
            derived[x] = b
        if derived != pg.conj_maps[f]:
            sf_ok, sf_detail = False, f"conjugation map of {pg.labels[f]} disagrees with the table"
            break
    checks.append(LocalityCheck("conjugation-maps-match-table", sf_ok, sf_detail))

    # D = D_Delta on words of length <= k (full-domain proof covers all k)
    dom_k = min(k, 3)
    if loc.proven_full:
        dom_ok, dom_detail = True, "full domain"
    else:
        via_sw = set(pg.iter_domain_words(dom_k))
        via_chains = set(chain_domain_words(loc, dom_k))
        dom_ok = via_sw == via_chains
        dom_detail = ""
        if not dom_ok:
            diff = sorted(via_sw.symmetric_difference(via_chains))
            w = diff[0]
            side = "S_w test only" if w in via_sw else "chain search only"
            dom_detail = f"word {pg.label_word(w)} in {side}"
    checks.append(LocalityCheck("domain-matches-chains", dom_ok, dom_detail))

    all_ok = all(c.ok for c in checks)
    return LocalityReport(all_ok, tuple(checks), pg_report)
