"""
Word problem for finitely presented groups with three panel subgroups.

A group datum is a presentation together with three panel subgroups, one
for each type pair (0,1), (1,2), (2,0).  Words are rewritten with a
shortlex Knuth-Bendix system; when completion does not converge inside the
rule budget the system is only certified up to a bounded overlap length
and every word handed to it is length-checked.

Internally a word is a ``str`` with one character per symbol.  The
characters are chosen so that plain string comparison agrees with the
declared symbol order, hence shortlex order is ``(len(w), w)``.

>>> G = Group.from_preset("paper-q2")
>>> G.format(G.normal_form(G.parse("s0 s0 s0")))
'1'
>>> len(G.subgroup_closure(G.parse_list(["s0", "s1"])))
21
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

__all__ = [
    "DatumError",
    "CompletionError",
    "LengthError",
    "GroupDatum",
    "RewriteSystem",
    "Group",
    "parse_group_datum",
    "load_preset",
    "knuth_bendix_complete",
    "shortlex_key",
    "TYPE_PAIRS",
]

TYPE_PAIRS = ((0, 1), (1, 2), (2, 0))


class DatumError(ValueError):
    """Malformed or inconsistent group datum."""


class CompletionError(RuntimeError):
    """Knuth-Bendix could not certify the system at the requested bound."""


class LengthError(ValueError):
    """A word exceeds the certified safe length of a bounded system."""


def shortlex_key(w: str):
    return (len(w), w)


def _symbol_char(k: int) -> str:
    # monotone code points: 'A'..'Z', 'a'..'z', then the Latin-1 block
    if k < 26:
        return chr(65 + k)
    if k < 52:
        return chr(71 + k)
    return chr(0x100 + k)


@dataclass(frozen=True)
class GroupDatum:
    """Presentation with panel subgroups.

    ``symbols`` lists every generator immediately followed by its formal
    inverse (``g`` then ``g'``).  Relators and panel generators are stored
    as tuples of symbol names.
    """

    generators: tuple[str, ...]
    relators: tuple[tuple[str, ...], ...]
    panels: tuple[tuple[str, ...], ...]  # indexed by p, type pair (p, p+1)
    order_q: int
    name: str = ""

    @property
    def symbols(self) -> tuple[str, ...]:
        out = []
        for g in self.generators:
            out.extend((g, g + "'"))
        return tuple(out)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "generators": list(self.generators),
            "relators": [" ".join(r) for r in self.relators],
            "panels": [
                {"type_pair": list(TYPE_PAIRS[p]), "generators": list(gens)}
                for p, gens in enumerate(self.panels)
            ],
            "q": self.order_q,
        }


def _split_word(text: str, known: set[str]) -> tuple[str, ...]:
    word = tuple(text.split())
    for s in word:
        if s not in known:
            raise DatumError(f"unknown symbol {s!r} in {text!r}")
    return word


def parse_group_datum(text: str | dict) -> GroupDatum:
    """Validate a JSON config document (string or already-decoded dict)."""
    doc = json.loads(text) if isinstance(text, str) else dict(text)
    for key in ("generators", "relators", "panels", "q"):
        if key not in doc:
            raise DatumError(f"missing key {key!r}")
    gens = [str(g) for g in doc["generators"]]
    if not gens:
        raise DatumError("no generators")
    seen = set()
    for g in gens:
        if g in seen:
            raise DatumError(f"duplicate generator {g!r}")
        if not g or "'" in g or any(c.isspace() for c in g):
            raise DatumError(f"bad generator name {g!r}")
        seen.add(g)
    known = set(gens) | {g + "'" for g in gens}

    relators = []
    for r in doc["relators"]:
        word = _split_word(str(r), known)
        if not word:
            raise DatumError("empty relator")
        relators.append(word)

    q = doc["q"]
    if not isinstance(q, int) or isinstance(q, bool) or q < 2:
        raise DatumError(f"q must be an integer >= 2, got {q!r}")

    panels: dict[int, tuple[str, ...]] = {}
    for entry in doc["panels"]:
        pair = tuple(entry["type_pair"])
        if pair not in TYPE_PAIRS:
            raise DatumError(f"bad type pair {list(pair)}")
        p = TYPE_PAIRS.index(pair)
        if p in panels:
            raise DatumError(f"duplicate panel type pair {list(pair)}")
        pg = tuple(str(x) for x in entry["generators"])
        for x in pg:
            if x not in known:
                raise DatumError(f"unknown panel generator {x!r}")
        panels[p] = pg
    for p, pair in enumerate(TYPE_PAIRS):
        if p not in panels:
            raise DatumError(f"missing panel type pair {list(pair)}")

    return GroupDatum(
        generators=tuple(gens),
        relators=tuple(relators),
        panels=tuple(panels[p] for p in range(3)),
        order_q=q,
        name=str(doc.get("name", "")),
    )


def preset_path(name: str):
    return resources.files("a2boundary") / "presets" / f"{name}.json"


def load_preset(name: str = "paper-q2") -> GroupDatum:
    path = preset_path(name)
    if not path.is_file():
        raise DatumError(f"unknown preset {name!r}")
    return parse_group_datum(path.read_text())


@dataclass
class RewriteSystem:
    """Shortlex rewriting system over an encoded alphabet.

    ``status`` is ``"complete"`` or ``"bounded-confluent"``; in the second
    case ``max_overlap`` is the certified overlap length L and words longer
    than L // 2 are refused.
    """

    symbols: tuple[str, ...]
    rules: dict[str, str]
    status: str
    max_overlap: int | None = None
    _lens: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self):
        self.alphabet = "".join(_symbol_char(k) for k in range(len(self.symbols)))
        self._char = dict(zip(self.symbols, self.alphabet))
        self._name = dict(zip(self.alphabet, self.symbols))
        self._inv = {}
        for k in range(0, len(self.alphabet), 2):
            a, b = self.alphabet[k], self.alphabet[k + 1]
            self._inv[a], self._inv[b] = b, a
        self._lens = tuple(sorted({len(l) for l in self.rules}))

    @property
    def safe_length(self) -> int | None:
        if self.status == "complete":
            return None
        return self.max_overlap // 2

    def check_length(self, n: int):
        safe = self.safe_length
        if safe is not None and n > safe:
            raise LengthError(f"word of length {n} exceeds certified length {safe}")

    def encode(self, symbols) -> str:
        return "".join(self._char[s] for s in symbols)

    def decode(self, w: str) -> tuple[str, ...]:
        return tuple(self._name[c] for c in w)

    def format(self, w: str) -> str:
        return " ".join(self.decode(w)) if w else "1"

    def reduce(self, w: str, prefix: str = "") -> str:
        """Rewrite ``prefix + w`` to normal form.

        ``prefix`` must already be irreducible; only the tail is scanned.
        """
        rules, lens = self.rules, self._lens
        out = prefix
        stack = list(reversed(w))
        while stack:
            out += stack.pop()
            n = len(out)
            for L in lens:
                if L > n:
                    break
                r = rules.get(out[n - L:])
                if r is not None:
                    out = out[: n - L]
                    stack.extend(reversed(r))
                    break
        return out

    def is_reduced(self, w: str) -> bool:
        n = len(w)
        for i in range(n):
            for L in self._lens:
                if i + L > n:
                    break
                if w[i:i + L] in self.rules:
                    return False
        return True

    def inverse_word(self, w: str) -> str:
        return "".join(self._inv[c] for c in reversed(w))

    def critical_pairs(self, max_overlap: int | None = None):
        """Yield ``(overlap_word, nf1, nf2)`` for unresolved critical pairs."""
        lhss = sorted(self.rules, key=shortlex_key)
        by_prefix: dict[str, list[str]] = {}
        for l in lhss:
            for k in range(1, len(l)):
                by_prefix.setdefault(l[:k], []).append(l)
        for l1 in lhss:
            r1 = self.rules[l1]
            for k in range(1, len(l1)):
                suffix = l1[-k:]
                for l2 in by_prefix.get(suffix, ()):
                    overlap = l1 + l2[k:]
                    if max_overlap is not None and len(overlap) > max_overlap:
                        continue
                    a = self.reduce(r1 + l2[k:])
                    b = self.reduce(l1[:-k] + self.rules[l2])
                    if a != b:
                        yield overlap, a, b


def _orient(u: str, v: str):
    return (u, v) if shortlex_key(u) > shortlex_key(v) else (v, u)


def knuth_bendix_complete(
    datum: GroupDatum, max_rules: int = 5000, max_overlap: int = 40
) -> RewriteSystem:
    """Shortlex Knuth-Bendix completion of ``datum``.

    Returns a complete system when completion converges with at most
    ``max_rules`` rules.  Otherwise falls back to a system certified for
    overlaps of length <= ``max_overlap`` and raises
    :class:`CompletionError` if some such critical pair still fails to
    resolve.
    """
    rs = RewriteSystem(datum.symbols, {}, "complete")
    inv = rs._inv
    eqns = [(c + inv[c], "") for c in rs.alphabet]
    eqns += [(rs.encode(r), "") for r in datum.relators]

    rules: dict[str, str] = {}
    pending = list(eqns)

    def add_pending():
        while pending:
            pending.sort(key=lambda e: shortlex_key(max(e, key=shortlex_key)), reverse=True)
            u, v = pending.pop()
            u, v = rs.reduce(u), rs.reduce(v)
            if u == v:
                continue
            lhs, rhs = _orient(u, v)
            # drop rules made redundant by the new left-hand side
            for l in [l for l in rules if lhs in l]:
                pending.append((l, rules.pop(l)))
            rules[lhs] = rhs
            rs._lens = tuple(sorted({len(l) for l in rules}))
            for l in rules:
                if l != lhs and lhs in rules[l]:
                    rules[l] = rs.reduce(rules[l])

    rs.rules = rules
    converged = False
    while True:
        add_pending()
        new = [(a, b) for _, a, b in rs.critical_pairs()]
        if not new:
            converged = True
            break
        if len(rules) > max_rules:
            break
        pending.extend(new)

    if converged:
        rs.status, rs.max_overlap = "complete", None
        return rs
    rs.status, rs.max_overlap = "bounded-confluent", max_overlap
    bad = next(iter(rs.critical_pairs(max_overlap)), None)
    if bad is not None:
        raise CompletionError(
            f"unresolved critical pair at overlap {rs.format(bad[0])!r} "
            f"(length {len(bad[0])} <= {max_overlap})"
        )
    return rs


class Group:
    """Group datum plus its rewriting system.

    Elements are normal-form words in the internal encoding.  Right
    multiplication by panel elements moves between adjacent chambers.
    """

    def __init__(self, datum: GroupDatum, rs: RewriteSystem | None = None, **kb_options):
        self.datum = datum
        self.rs = rs if rs is not None else knuth_bendix_complete(datum, **kb_options)
        self.q = datum.order_q
        cap = 4 * (self.q + 1)
        self.panel_subgroups: list[list[str]] = []
        for p, gens in enumerate(datum.panels):
            P = self.subgroup_closure([self.rs.encode([g]) for g in gens], cap=cap)
            if len(P) != self.q + 1:
                raise DatumError(
                    f"panel {list(TYPE_PAIRS[p])} closure has {len(P)} elements, "
                    f"expected q+1 = {self.q + 1}"
                )
            self.panel_subgroups.append(P)

    @classmethod
    def from_preset(cls, name: str = "paper-q2", **kw) -> "Group":
        return cls(load_preset(name), **kw)

    def parse(self, text: str) -> str:
        return self.rs.encode(_split_word(text, set(self.rs.symbols)))

    def parse_list(self, texts) -> list[str]:
        return [self.parse(t) for t in texts]

    def format(self, w: str) -> str:
        return self.rs.format(w)

    @property
    def identity(self) -> str:
        return ""

    def normal_form(self, w: str) -> str:
        self.rs.check_length(len(w))
        return self.rs.reduce(w)

    def multiply(self, a: str, b: str) -> str:
        self.rs.check_length(len(a) + len(b))
        return self.rs.reduce(b, prefix=a)

    def invert(self, a: str) -> str:
        self.rs.check_length(len(a))
        return self.rs.reduce(self.rs.inverse_word(a))

    def subgroup_closure(self, gens, cap: int = 10_000) -> list[str]:
        """Closure of ``gens`` under multiplication and inversion, shortlex sorted."""
        gens = [self.normal_form(g) for g in gens]
        gens = gens + [self.invert(g) for g in gens]
        seen = {""}
        queue = deque([""])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.multiply(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise DatumError(f"subgroup closure exceeds cap {cap}")
                    queue.append(y)
        return sorted(seen, key=shortlex_key)

    def vertex_subgroup(self, t: int) -> list[str]:
        """Chambers at a type-t vertex: generated by the panels (t-1,t) and (t,t+1)."""
        P = self.panel_subgroups
        return self.subgroup_closure(P[(t - 1) % 3] + P[t % 3])
