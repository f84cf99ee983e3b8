"""Degree-bounded noncommutative Groebner bases for homogeneous ideals.

Completion runs degree by degree.  At degree d every overlap between two
existing rules whose overlap word has length d is turned into an
S-polynomial, reduced, and the surviving polynomials (together with the
input relations of degree d) are row-reduced as one batch.  Because every
rule added at degree d has a leading word of length d, no new leading word
can be a proper subword of an older one, so the rule set stays
interreduced without a separate re-insertion pass.
"""
from __future__ import annotations

import heapq
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactnum import QQ, Field, field_of
from .freealg import GENS, NcPoly, Word, _raw, format_poly, parse_poly, parse_word, word_key, word_str, words
from .linalg import Echelon

DEFAULT_N = 8


class DegreeBoundError(ValueError):
    pass


class RewriteSystem:
    """Rules ``lead -> tail`` with a memoized normal form.

    ``complete_through`` is the degree through which all overlaps have been
    resolved.  ``globally_complete`` is set when no unresolved overlap exists
    in any degree; ``truncated`` is its negation.
    """

    def __init__(self, gens: Sequence[int] = range(4), degree_bound: int = DEFAULT_N, field: Field = QQ):
        self.gens = tuple(sorted(gens))
        self.degree_bound = degree_bound
        self.field = field
        self.rules: Dict[Word, NcPoly] = {}
        self.order: List[Word] = []
        self.complete_through = 0
        self.globally_complete = False
        self._lengths: List[int] = []
        self._cache: Dict[Word, NcPoly] = {}

    @property
    def truncated(self) -> bool:
        return not self.globally_complete

    def rule_list(self) -> List[Tuple[Word, NcPoly]]:
        return [(w, self.rules[w]) for w in self.order]

    def _add_rules(self, new: List[Tuple[Word, NcPoly]]):
        for lead, tail in new:
            self.rules[lead] = tail
            self.order.append(lead)
        self._lengths = sorted({len(w) for w in self.rules})
        self._cache.clear()

    def find_lead(self, w: Word) -> Optional[Tuple[int, Word]]:
        """Leftmost (then shortest) occurrence of a leading word in w."""
        rules = self.rules
        n = len(w)
        for i in range(n):
            for l in self._lengths:
                if i + l > n:
                    break
                sub = w[i:i + l]
                if sub in rules:
                    return i, sub
        return None

    def is_normal(self, w: Word) -> bool:
        return self.find_lead(w) is None

    def _nf_word(self, w: Word) -> NcPoly:
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        out: Dict[Word, object] = {}
        pending: Dict[Word, object] = {w: 1}
        heap = [(-len(w), _neg_word(w), w)]
        while heap:
            _, _, v = heapq.heappop(heap)
            c = pending.pop(v)
            if c == 0:
                continue
            cached = self._cache.get(v)
            if cached is not None and v != w:
                for u, d in cached.terms.items():
                    s = out.get(u, 0) + c * d
                    if s == 0:
                        out.pop(u, None)
                    else:
                        out[u] = s
                continue
            hit = self.find_lead(v)
            if hit is None:
                s = out.get(v, 0) + c
                if s == 0:
                    out.pop(v, None)
                else:
                    out[v] = s
                continue
            i, lead = hit
            pre, post = v[:i], v[i + len(lead):]
            for t, d in self.rules[lead].terms.items():
                u = pre + t + post
                if u in pending:
                    pending[u] = pending[u] + c * d
                else:
                    pending[u] = c * d
                    heapq.heappush(heap, (-len(u), _neg_word(u), u))
        res = _raw(out)
        self._cache[w] = res
        return res

    def reduce(self, p: NcPoly) -> NcPoly:
        """Normal form without the degree guard (used during completion)."""
        out: Dict[Word, object] = {}
        for w, c in p.terms.items():
            for u, d in self._nf_word(w).terms.items():
                s = out.get(u, 0) + c * d
                if s == 0:
                    out.pop(u, None)
                else:
                    out[u] = s
        return _raw(out)

    def normal_form(self, p: NcPoly) -> NcPoly:
        if p.terms and not self.globally_complete and p.degree() > self.complete_through:
            raise DegreeBoundError(
                f"degree {p.degree()} exceeds completed degree {self.complete_through}")
        return self.reduce(p)

    def normal_words(self, n: int) -> List[Word]:
        """Normal words of length n, in increasing order."""
        layer = [()]
        for _ in range(n):
            nxt = []
            for w in layer:
                for g in self.gens:
                    v = w + (g,)
                    if not self._suffix_hits(v):
                        nxt.append(v)
            layer = nxt
        return layer

    def _suffix_hits(self, v: Word) -> bool:
        for l in self._lengths:
            if l > len(v):
                break
            if v[-l:] in self.rules:
                return True
        return False

    def to_text(self) -> str:
        lines = [
            f"# gens {' '.join(GENS[g] for g in self.gens)}",
            f"# field {self.field.spec()}",
            f"# degree_bound {self.degree_bound} complete_through {self.complete_through}"
            f" globally_complete {int(self.globally_complete)}",
        ]
        for lead, tail in self.rule_list():
            lines.append(f"{word_str(lead)} -> {format_poly(tail)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, field: Optional[Field] = None) -> "RewriteSystem":
        from .exactnum import parse_field
        from .freealg import GEN_INDEX
        gens, meta, rules = range(4), {}, []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if parts[0] == "gens":
                    gens = [GEN_INDEX[g] for g in parts[1:]]
                elif parts[0] == "field" and field is None:
                    field = parse_field(parts[1])
                else:
                    meta.update(zip(parts[::2], parts[1::2]))
                continue
            lhs, rhs = line.split("->")
            rules.append((parse_word(lhs), rhs))
        field = field or QQ
        rs = cls(gens, int(meta.get("degree_bound", DEFAULT_N)), field)
        rs._add_rules([(lead, parse_poly(rhs, field)) for lead, rhs in rules])
        rs.complete_through = int(meta.get("complete_through", 0))
        rs.globally_complete = meta.get("globally_complete", "0") == "1"
        return rs


def _neg_word(w: Word):
    # heap key making longer, then lexicographically larger, words pop first
    return tuple(-g for g in w)


def _overlaps(rs: RewriteSystem, d: int):
    """Overlap ambiguities of total length d, in canonical order."""
    leads = rs.order
    for a, u in enumerate(leads):
        for b, v in enumerate(leads):
            k = len(u) + len(v) - d  # length of the shared part
            if 1 <= k < min(len(u), len(v)) and u[len(u) - k:] == v[:k]:
                yield a, b, k


def _spoly(rs: RewriteSystem, u: Word, v: Word, k: int) -> NcPoly:
    # u*v[k:] == u[:-k]*v ; reduce each side by its own rule
    left = rs.rules[u] * NcPoly.word(v[k:], 1)
    right = NcPoly.word(u[:len(u) - k], 1) * rs.rules[v]
    return left - right


def _has_overlap_above(rs: RewriteSystem, d: int) -> bool:
    for u in rs.order:
        for v in rs.order:
            for k in range(1, min(len(u), len(v))):
                if len(u) + len(v) - k > d and u[len(u) - k:] == v[:k]:
                    return True
    return False


def _check_relations(relations: Sequence[NcPoly]):
    for r in relations:
        if not r:
            raise ValueError("zero relation")
        if not r.is_homogeneous():
            raise ValueError(f"inhomogeneous relation {format_poly(r)}")
        if r.degree() == 0:
            raise ValueError("constant relation")


def complete(relations: Sequence[NcPoly], N: int = DEFAULT_N, gens: Iterable[int] = range(4)) -> RewriteSystem:
    relations = [r for r in relations]
    _check_relations(relations)
    field = field_of(*[c for r in relations for c in r.terms.values()]) if relations else QQ
    rs = RewriteSystem(gens, N, field)
    by_deg: Dict[int, List[NcPoly]] = {}
    for r in relations:
        by_deg.setdefault(r.degree(), []).append(r)
    one = field.one()
    top_input = max(by_deg, default=0)
    d = 0
    for d in range(1, N + 1):
        batch = []
        for a, b, k in _overlaps(rs, d):
            s = rs.reduce(_spoly(rs, rs.order[a], rs.order[b], k))
            if s:
                batch.append(s)
        for r in by_deg.get(d, []):
            s = rs.reduce(r)
            if s:
                batch.append(s)
        new = _batch_rules(batch, one)
        if new:
            rs._add_rules(new)
        rs.complete_through = d
        max_rule = max(rs._lengths, default=0)
        # every overlap among the current rules has length <= 2*max_rule - 1
        if d >= top_input and d >= 2 * max_rule - 1:
            rs.globally_complete = True
            break
        if not rs.normal_words(d) and d >= top_input:
            # everything of degree >= d is zero, so nothing more can happen
            rs.globally_complete = True
            break
    if rs.globally_complete:
        rs.complete_through = max(rs.complete_through, N)
    else:
        rs.globally_complete = not _has_overlap_above(rs, N) and top_input <= N
    return rs


def _batch_rules(batch: List[NcPoly], one) -> List[Tuple[Word, NcPoly]]:
    if not batch:
        return []
    ech = Echelon(key=word_key)
    for p in batch:
        ech.add(p.terms)
    out = []
    for lead in sorted(ech.pivots, key=word_key):
        row = ech.pivots[lead]
        tail = _raw({w: -c for w, c in row.items() if w != lead})
        out.append((lead, tail))
    return out


def normal_form(rs: RewriteSystem, p: NcPoly) -> NcPoly:
    return rs.normal_form(p)


def graded_dims(rs: RewriteSystem, N: int) -> List[int]:
    if N > rs.complete_through and not rs.globally_complete:
        raise DegreeBoundError(f"dims requested through {N}, completed through {rs.complete_through}")
    dims = [1]
    layer = [()]
    for _ in range(N):
        nxt = []
        for w in layer:
            for g in rs.gens:
                v = w + (g,)
                if not rs._suffix_hits(v):
                    nxt.append(v)
        layer = nxt
        dims.append(len(layer))
    return dims


def ideal_span(relations: Sequence[NcPoly], n: int, gens: Iterable[int] = range(4)) -> Echelon:
    """Row-reduced span of all u*r*v of total degree n."""
    gens = sorted(gens)
    ech = Echelon(key=word_key)
    for r in relations:
        dr = r.degree()
        if dr > n:
            continue
        rest = n - dr
        for a in range(rest + 1):
            for u in words(a, gens):
                for v in words(rest - a, gens):
                    ech.add({u + w + v: c for w, c in r.terms.items()})
    return ech


def dims_oracle(relations: Sequence[NcPoly], N: int, gens: Iterable[int] = range(4)) -> List[int]:
    """Graded dims by plain linear algebra on the ideal, no rewriting."""
    relations = list(relations)
    _check_relations(relations)
    gens = sorted(gens)
    return [len(gens) ** n - ideal_span(relations, n, gens).rank() for n in range(N + 1)]
