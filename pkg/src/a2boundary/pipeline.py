"""
End-to-end run: group -> ball -> alphabets -> matrices -> checks -> K-theory.

A run writes ``report.json``, ``report.md`` and the alphabet/matrix exports
into the output directory, and caches the chamber ball under
``<out>/cache`` unless caching is disabled.
"""

from __future__ import annotations

import json
import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import io as exports
from .building import build_chamber_ball, validate_link
from .group import Group, load_preset, parse_group_datum
from .ktheory import (
    A0,
    KTheoryError,
    compute_CGamma,
    compute_CGamma_M,
    cuntz_k,
    generic_presentation_group,
    k_groups_rank2,
    kunneth,
    order_of_unit,
    rank1_ck_k,
    unit_class,
    unit_congruences,
)
from .oracle import run_minors_oracle
from .report import VerificationReport, emit_report
from .shift import (
    block_structure_ok,
    build_hexagon_alphabet,
    build_tile_alphabet,
    build_transition_M,
    build_transition_N,
    decorating_set,
    line_sums,
    n_adjacency_characterization,
    verify_H1,
    verify_H2,
    verify_H3,
    word_count_crosscheck,
)

__all__ = [
    "ConfigError",
    "PipelineConfig",
    "PipelineState",
    "STAGES",
    "run_pipeline",
    "export_matrices",
    "load_config",
]

STAGES = ("build", "links", "alphabets", "matrices", "verify", "ktheory", "arithmetic", "oracle")
MIN_MATRIX_RADIUS = 10
WORD_SHAPES = ((0, 0), (1, 0), (0, 1), (1, 1))

A_PRECISELY = "precisely q² nonzero entries"
A_H123 = "(H1),(H2), and (H3)"
A_KI = "K_i(𝔄_Γ)=ℤ_{q²−1}"


class ConfigError(ValueError):
    """Invalid pipeline configuration, raised before any stage runs."""


@dataclass
class PipelineConfig:
    preset: str | None = "paper-q2"
    datum_path: str | None = None
    radius: int = 12
    h3_window: int = 2
    h3_cap: int = 6
    out_dir: str = "a2boundary-out"
    cache: bool = True
    workers: int = 1
    oracle_cases: int = 200
    seed: int = 0

    def validate(self, stages=STAGES):
        if not isinstance(self.radius, int) or self.radius < 1:
            raise ConfigError(f"radius must be a positive integer, got {self.radius!r}")
        needs_tiles = {"alphabets", "matrices", "verify", "ktheory"} & set(stages)
        if needs_tiles and self.radius < MIN_MATRIX_RADIUS:
            raise ConfigError(
                f"radius {self.radius} too small for tile matrices (need >= {MIN_MATRIX_RADIUS})"
            )
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.h3_window < 1 or self.h3_cap < self.h3_window:
            raise ConfigError("need 1 <= h3_window <= h3_cap")
        if self.preset is None and self.datum_path is None:
            raise ConfigError("no group datum: give a preset or a datum file")

    def load_datum(self):
        if self.datum_path is not None:
            return parse_group_datum(Path(self.datum_path).read_text())
        return load_preset(self.preset)

    def to_dict(self) -> dict:
        return asdict(self)


def load_config(path) -> PipelineConfig:
    doc = json.loads(Path(path).read_text())
    known = set(PipelineConfig.__dataclass_fields__)
    extra = set(doc) - known
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    return PipelineConfig(**doc)


@dataclass
class PipelineState:
    """Intermediate objects of a run, kept for callers that want more than the report."""

    group: Group | None = None
    ball: object = None
    A: object = None
    L: object = None
    M: tuple = ()
    N: tuple = ()
    exports: list[Path] = field(default_factory=list)
    extras: dict = field(default_factory=dict)


# --- parallel helpers (fork shares the ball with workers) -------------------

_SHARED = {}


def _links_chunk(vertices):
    ball = _SHARED["ball"]
    out = []
    for v in vertices:
        rep = validate_link(ball.vertex_link(v), ball.q)
        if not rep.passed:
            out.append((v.vtype, ball.group.format(v.key), rep.checks, rep.details))
    return out


def _word_count(shape):
    s = _SHARED
    rep = word_count_crosscheck(shape, s["ball"], s["A"], s["M1"], s["M2"])
    return rep.status, rep.details


def _pmap(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    ctx = mp.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as ex:
        return list(ex.map(fn, items))


# --- stages -----------------------------------------------------------------

def _stage_build(cfg, st, rep, log):
    datum = cfg.load_datum()
    st.group = group = Group(datum)
    rep.add("rewriting system", group.rs.status == "complete", "complete",
            {"status": group.rs.status, "rules": len(group.rs.rules)}, "normal forms")
    ball = None
    cache_dir = Path(cfg.out_dir) / "cache"
    if cfg.cache:
        ball = exports.load_ball(cache_dir, group, cfg.radius)
        log(f"ball cache {'hit' if ball is not None else 'miss'}")
    if ball is None:
        ball = build_chamber_ball(group, cfg.radius)
        if cfg.cache:
            exports.save_ball(cache_dir, ball)
    st.ball = ball
    q = group.q
    k = len(group.vertex_subgroup(0))
    k_ball = len(ball.residue(0, 0))
    rep.add("chambers per vertex k", k == k_ball == (q + 1) * (q * q + q + 1),
            (q + 1) * (q * q + q + 1), {"subgroup": k, "ball": k_ball},
            "the number of chambers of Δ which contain the vertex O")
    log(f"ball radius {cfg.radius}: {len(ball)} chambers")


def _stage_links(cfg, st, rep, log):
    ball = st.ball
    verts = ball.interior_vertices()
    _SHARED["ball"] = ball
    w = cfg.workers
    chunks = [verts[i::w] for i in range(w)] if w > 1 else [verts]
    bad = [x for part in _pmap(_links_chunk, chunks, w) for x in part]
    bad.sort(key=lambda x: (x[0], len(x[1]), x[1]))
    rep.add("vertex links", not bad, {"failures": 0},
            {"interior_vertices": len(verts), "failures": len(bad)},
            "projective plane of order q", counterexample=bad[:3])
    log(f"{len(verts)} interior vertex links checked")


def _stage_alphabets(cfg, st, rep, log):
    ball, q = st.ball, st.group.q
    st.A = A = build_tile_alphabet(ball)
    st.L = L = build_hexagon_alphabet(ball)
    rep.add("tile alphabet |A|", len(A) == 3 * q**5, 3 * q**5,
            {"size": len(A), "blocks": A.block_sizes()}, "#A = 3q⁵")
    rep.add("hexagon alphabet |Λ|", len(L) == 3 * q**3, 3 * q**3,
            {"size": len(L), "blocks": L.block_sizes()}, "there are q³ reduced tiles")
    D, drep = decorating_set(ball, A)
    k = (q + 1) * (q * q + q + 1)
    ok = drep.passed and drep.details["k"] == k and drep.details["per_chamber"] == [q**5]
    rep.add("decorations |D per initial chamber|", ok,
            {"k": k, "per_chamber": q**5, "total": k * q**5, "bijective_onto_A0": True},
            {"k": drep.details["k"], "per_chamber": drep.details["per_chamber"],
             "total": drep.details["total"], "bijective_onto_A0": drep.passed},
            "the number of chambers of Δ which contain the vertex O",
            counterexample=drep.details["non_bijective"])
    log(f"alphabets: |A|={len(A)} |Λ|={len(L)}")


def _stage_matrices(cfg, st, rep, log):
    ball, A, L, q = st.ball, st.A, st.L, st.group.q
    st.M = tuple(build_transition_M(j, ball, A, check=False) for j in (1, 2))
    st.N = tuple(build_transition_N(j, ball, L, check=False) for j in (1, 2))
    sums, blocks, bad = {}, {}, []
    for name, X, alph, j in (("M1", st.M[0], A, 1), ("M2", st.M[1], A, 2),
                             ("N1", st.N[0], L, 1), ("N2", st.N[1], L, 2)):
        r, c = line_sums(X)
        vals = sorted(set(r.tolist()) | set(c.tolist()))
        sums[name] = vals
        if vals != [q * q]:
            bad.append({"matrix": name, "row": int(np.argmax(r != q * q)),
                        "col": int(np.argmax(c != q * q))})
        blocks[name] = block_structure_ok(X, alph.blocks, j)
    rep.add("row and column sums", not bad, q * q, sums, A_PRECISELY, counterexample=bad)
    rep.add("block structure", all(blocks.values()), "A_i -> A_{i+j} for every entry",
            blocks, A_PRECISELY, counterexample=[k for k, v in blocks.items() if not v])
    rep.add("ones in M1, M2", all(int(X.sum()) == len(A) * q * q for X in st.M),
            len(A) * q * q, [int(X.sum()) for X in st.M], A_PRECISELY)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    st.exports = [
        exports.write_alphabet(out / "tile.alphabet.txt", st.group, A),
        exports.write_alphabet(out / "hexagon.alphabet.txt", st.group, L),
    ]
    for name, X, alph in (("M1", st.M[0], A), ("M2", st.M[1], A),
                          ("N1", st.N[0], L), ("N2", st.N[1], L)):
        st.exports.append(exports.write_matrix(out / f"{name}.matrix.txt", alph, X, name))
    log(f"matrices built; exports in {out}")


def _stage_verify(cfg, st, rep, log):
    M1, M2 = st.M
    h1 = verify_H1(M1, M2)
    rep.add("H1", h1.passed, {"commute": True, "zero_one": True},
            {"commute": h1.details["commute"], "zero_one": h1.details["zero_one"]}, A_H123,
            counterexample=h1.details)
    h2 = verify_H2(M1, M2)
    rep.add("H2", h2.passed, {"strong_components": 1, "cube_positive": True},
            {k: h2.details[k] for k in ("strong_components", "cube_positive")}, A_H123,
            counterexample=h2.details.get("unreachable"))
    h3 = verify_H3(M1, M2, window=cfg.h3_window, cap=cfg.h3_cap, seed=cfg.seed)
    n_off = (2 * cfg.h3_window + 1) ** 2 - 1
    rep.add(h3.name, None, {"offsets_with_witness": n_off},
            {"offsets_with_witness": len(h3.details["witnesses"]), "window": cfg.h3_window},
            A_H123, counterexample={"missing": h3.details["missing"]}, status=h3.status)
    st.extras["H3"] = h3
    for j, N in ((1, st.N[0]), (2, st.N[1])):
        r = n_adjacency_characterization(st.ball, st.L, N, j)
        anchor = "η_i=ξ_i and η̄_{i+1}=ξ̄_{i+2}" if j == 1 else "ζ_i=ξ_i and ζ̄_{i+2}=ξ̄_{i+1}"
        rep.add(f"N{j} characterization", r.passed, "support matches chamber matching",
                {"mismatched_columns": len(r.details["mismatched_columns"])}, anchor,
                counterexample=r.details["mismatched_columns"])
    _SHARED.update(ball=st.ball, A=st.A, M1=M1, M2=M2)
    results = _pmap(_word_count, list(WORD_SHAPES), cfg.workers)
    for shape, (status, det) in zip(WORD_SHAPES, results):
        rep.add(f"word count {shape}", status == "pass", "matrix count = orbit count",
                det, "in bijective correspondence with the words of shape (m,n)",
                counterexample=det)
    log("shift checks done")


def _stage_ktheory(cfg, st, rep, log):
    q = st.group.q
    n = q * q - 1
    CN = compute_CGamma(*st.N)
    CM = compute_CGamma_M(*st.M)
    st.extras.update(CN=CN, CM=CM)
    expect = {"free_rank": 0, "torsion": [n]}
    rep.add("C(Γ) from N", CN.group.to_dict() == expect, expect, CN.group.to_dict(), A_KI)
    rep.add("C(Γ) from M", CM.group.to_dict() == expect, expect, CM.group.to_dict(), A_KI)
    rep.add("C(Γ) variants agree", CN.group == CM.group, True, CN.group == CM.group, A_KI)
    gens = {}
    for name, C, size in (("Λ", CN, len(st.L)), ("A", CM, len(st.A))):
        classes = {C.generator_class(k) for k in range(size)}
        g = C.generator_class(0)
        gens[name] = {"distinct_classes": len(classes), "generates": C.generates(g),
                      "g": list(g)}
    rep.add("generator classes coincide and generate",
            all(v["distinct_classes"] == 1 and v["generates"] for v in gens.values()),
            {"distinct_classes": 1, "generates": True}, gens, "all elements of Λ_i are equal")
    K = k_groups_rank2(CM.group)
    rep.add("K0 = K1", K.K0.to_dict() == expect and K.K1 == K.K0,
            {"K0": expect, "K1": expect}, {"K0": K.K0.to_dict(), "K1": K.K1.to_dict()}, A_KI)
    try:
        u = unit_class(st.A, CM, q)
        observed = {"g": list(u.g), "sum_class": list(u.c), "unit_class": list(u.unit),
                    "g_order": CM.element_order(u.g), **u.checks}
        ok = u.passed
    except KTheoryError as exc:
        observed, ok = {"error": str(exc)}, False
    rep.add("unit classes", ok,
            {"sum_class": f"{3 * q}g", "unit_class": f"{3 * (q + 1)}g",
             "values": [(3 * q) % n, (3 * (q + 1)) % n]},
            observed, "(ℤ_{q²−1}, 3(q+1), ℤ_{q²−1})")
    log(f"C(Γ) = {CM.group}")


def _stage_arithmetic(cfg, st, rep, log):
    orders = {}
    try:
        orders = {q: order_of_unit(q) for q in range(2, 17)}
        ok = True
    except KTheoryError:
        ok = False
    rep.add("order of [1]", ok and orders.get(2) == 1 and orders.get(5) == 4 and orders.get(7) == 2,
            {"2": 1, "5": 4, "7": 2, "formulas agree q=2..16": True},
            {str(q): o for q, o in orders.items()}, "The order of [1]")
    a0 = rank1_ck_k(A0)
    rep.add("rank-1 example", str(a0) == "(Z, Z)", "(Z, Z)", str(a0), "K_*(𝒜₀)=(ℤ,ℤ)")
    o4 = cuntz_k(4)
    k44, k04 = kunneth(o4, o4), kunneth(a0, o4)
    rep.add("Künneth O4 ⊗ O4", str(k44) == "(Z_3, Z_3)", "(Z_3, Z_3)", str(k44),
            "K_i(𝒪_{q²}⊗𝒪_{q²}) = ℤ_{q²−1}")
    rep.add("Künneth A0 ⊗ O4", str(k04) == "(Z_3, Z_3)", "(Z_3, Z_3)", str(k04),
            "stably isomorphic to 𝒜₀ ⊗ 𝒪_{q²}")
    pres = {q: str(generic_presentation_group(q)) for q in range(2, 17)}
    bad = [q for q, g in pres.items() if g != f"Z_{q * q - 1}"]
    rep.add("generic-q presentation", not bad, "Z_{q²-1} for q = 2..16",
            {"failures": len(bad), "q=2": pres[2]}, "a_0=q^2a_0", counterexample=bad)
    cong = {q: unit_congruences(q) for q in range(2, 17)}
    bad = [q for q, c in cong.items() if not all(c.values())]
    rep.add("unit congruences", not bad, "both hold for q = 2..16", {"failures": len(bad)},
            "k ≡ 3(q+1) (mod q²−1)", counterexample=bad)


def _stage_oracle(cfg, st, rep, log):
    agree, failures = run_minors_oracle(cfg.oracle_cases, 6, seed=cfg.seed)
    rep.add("SNF vs minors oracle", not failures, {"agree": cfg.oracle_cases},
            {"agree": agree}, "Smith normal form", counterexample=failures[:1])


_RUNNERS = {
    "build": _stage_build,
    "links": _stage_links,
    "alphabets": _stage_alphabets,
    "matrices": _stage_matrices,
    "verify": _stage_verify,
    "ktheory": _stage_ktheory,
    "arithmetic": _stage_arithmetic,
    "oracle": _stage_oracle,
}

_NEEDS = {
    "links": ("build",),
    "alphabets": ("build",),
    "matrices": ("build", "alphabets"),
    "verify": ("build", "alphabets", "matrices"),
    "ktheory": ("build", "alphabets", "matrices"),
}


def run_pipeline(
    config: PipelineConfig,
    stages=STAGES,
    write: bool = True,
    log=None,
    state: PipelineState | None = None,
) -> VerificationReport:
    """Run the requested stages (plus what they depend on) and return the report.

    A stage that raises is recorded as a failed ``stage <name>`` check and
    the report is marked incomplete; later stages are skipped.
    """
    wanted = set(stages)
    unknown = wanted - set(STAGES)
    if unknown:
        raise ConfigError(f"unknown stages {sorted(unknown)}")
    for s in list(wanted):
        wanted.update(_NEEDS.get(s, ()))
    config.validate(wanted)
    log = log or (lambda msg: None)
    st = state if state is not None else PipelineState()
    rep = VerificationReport(config=config.to_dict())
    for name in STAGES:
        if name not in wanted:
            continue
        t0 = time.perf_counter()
        try:
            _RUNNERS[name](config, st, rep, log)
        except Exception as exc:  # recorded, not swallowed: the report is flagged
            rep.complete = False
            rep.add(f"stage {name}", False, "completes", "raised", "artifact",
                    counterexample=f"{type(exc).__name__}: {exc}")
            rep.timing[name] = time.perf_counter() - t0
            break
        rep.timing[name] = time.perf_counter() - t0
    if write:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(emit_report(rep, "json"))
        (out / "report.md").write_text(emit_report(rep, "markdown"))
    return rep


def export_matrices(config: PipelineConfig, log=None) -> list[Path]:
    """Build alphabets and matrices and write their triplet exports."""
    st = PipelineState()
    rep = run_pipeline(config, stages=("matrices",), write=False, log=log, state=st)
    if not rep.complete:
        failed = rep.checks[-1]
        raise RuntimeError(f"{failed.name}: {failed.counterexample}")
    return st.exports
