"""``rdk``: command-line front end over the JSON interchange format.

Commands that build a datum always print JSON, so they compose through pipes
(``rdk catalog C2 sc | rdk embed smooth --frobenius split:q=2``).  Wrapper
objects put the datum under a ``datum`` key, which every reader unwraps.
Commands that return a verdict print one text line unless ``--json`` is given.

Direction convention: a morphism "from R' to R" stores f: X' -> X on
character lattices, running along the arrow, while τ runs backwards on roots
(it sends target root indices to source root indices).

Exit codes: 0 success, 1 mathematical negative, 2 input error, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import abelian
from .asai import complete_embeddings, cyclic_block_embedding, smooth_covering
from .catalog import catalog
from .central import CentralProductError, central_product, recover_components
from .classify import ClassificationError, classify_products, isomorphic
from .embed import (
    EmbeddingError,
    classify_embedding,
    optimal_embedding,
    smooth_regular_embedding,
    steinberg_obstruction_check,
)
from .jsonio import (
    SchemaError,
    cproduct_from_json,
    datum_from_json,
    datum_to_json,
    dumps,
    loads,
    morphism_from_json,
    to_plain,
    triple_from_json,
)
from .morphism import (
    MorphismError,
    NotFrobenius,
    NotSteinberg,
    dualize,
    is_p_frobenius,
    is_p_isogeny,
    is_p_steinberg,
    scalar,
    validate_p_morphism,
)
from .rootdata import RootDatumError, dual, validate
from .zlattice import LatticeError

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

SCOPE_NOTE = "root-data level only: group-level isotypies and pinnings are not constructed"


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------


def _read(path: str) -> Any:
    if path == "-":
        text = sys.stdin.read()
        where = "<stdin>"
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        where = path
    try:
        return loads(text)
    except SchemaError as exc:
        raise InputError(f"{where}: {exc}") from None


def _frobenius(spec: str | None, R) -> Any:
    """``split:q=N`` (N a prime power) or a path to a morphism file."""
    if spec is None:
        return None
    if spec.startswith("split:"):
        body = spec[len("split:") :]
        if not body.startswith("q="):
            raise InputError(f"bad Frobenius spec {spec!r}; expected split:q=N")
        try:
            q = int(body[2:])
        except ValueError:
            raise InputError(f"bad Frobenius spec {spec!r}; q is not an integer") from None
        from .morphism import p_adic_exponent

        for p in range(2, q + 1):
            if q % p == 0:
                k = p_adic_exponent(q, p)
                if k is None:
                    raise InputError(f"q = {q} is not a prime power")
                return scalar(R, p, k)
        raise InputError(f"q = {q} is not a prime power")
    obj = _read(spec)
    if isinstance(obj, dict) and "morphism" in obj:
        obj = obj["morphism"]
    return morphism_from_json(obj, "$")


def _emit(args, payload: Any, text: str | None = None) -> None:
    if text is not None and not getattr(args, "json", False):
        print(text)
    else:
        print(dumps(to_plain(payload)))


def _morphism_bundle(args) -> tuple:
    """Morphism plus optional source/target from the file or from flags."""
    obj = _read(args.file)
    if isinstance(obj, dict) and "morphism" in obj:
        m = morphism_from_json(obj["morphism"], "$.morphism")
        src = datum_from_json(obj["source"], "$.source") if "source" in obj else None
        tgt = datum_from_json(obj["target"], "$.target") if "target" in obj else None
    else:
        m = morphism_from_json(obj)
        src = tgt = None
    if getattr(args, "source", None):
        src = datum_from_json(_read(args.source), "$")
    if getattr(args, "target", None):
        tgt = datum_from_json(_read(args.target), "$")
    return m, src, tgt


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    R = datum_from_json(_read(args.file), validate=False)
    v = validate(R)
    if v is None:
        _emit(args, {"valid": True, "rank": R.rank, "roots": len(R.roots)}, f"valid root datum of rank {R.rank} with {len(R.roots)} roots")
        return EXIT_OK
    _emit(args, {"valid": False, "violation": v}, f"invalid: {v}")
    return EXIT_NEGATIVE


def cmd_catalog(args) -> int:
    selector: Any = args.selector
    if selector.startswith("["):
        try:
            selector = json.loads(selector)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad selector: {exc.msg}") from None
    print(dumps(datum_to_json(catalog(args.type, selector))))
    return EXIT_OK


def cmd_dual(args) -> int:
    print(dumps(datum_to_json(dual(datum_from_json(_read(args.file))))))
    return EXIT_OK


def cmd_cproduct(args) -> int:
    res = central_product(cproduct_from_json(_read(args.file)))
    print(dumps(to_plain({"datum": res.datum, "embed": res.embed, "p1": res.p1, "p2": res.p2})))
    return EXIT_OK


def cmd_recover(args) -> int:
    c = recover_components(datum_from_json(_read(args.file)))
    print(
        dumps(
            to_plain(
                {
                    "derived": c.derived,
                    "radical": c.radical,
                    "A": {"invariant_factors": list(c.A.invariant_factors)},
                    "derived_projection": c.derived_projection,
                    "radical_projection": c.radical_projection,
                }
            )
        )
    )
    return EXIT_OK


def cmd_classify(args) -> int:
    from .report import classification_to_json, write_report

    t = triple_from_json(_read(args.file))
    result = classify_products(t, budget=args.budget, workers=args.workers)
    payload = classification_to_json(result)
    if args.report:
        paths = write_report(result, args.report)
        payload["report"] = {k: str(v) for k, v in paths.items()}
    if args.json:
        print(dumps(payload))
    else:
        print(f"{len(result.classes)} classes (|Aut(A)| = {result.aut_size}, A = {list(result.moduli)})")
        for cls in payload["classes"]:
            print(f"  {cls['label']}: coset of size {cls['coset_size']}, representative {cls['representative']['data']}")
    return EXIT_OK


def cmd_isomorphic(args) -> int:
    R1 = datum_from_json(_read(args.a))
    R2 = datum_from_json(_read(args.b))
    g = isomorphic(R1, R2)
    if g is None:
        _emit(args, {"isomorphic": False}, "not isomorphic")
        return EXIT_NEGATIVE
    _emit(args, {"isomorphic": True, "g": g}, f"isomorphic via {g.tolist()}")
    return EXIT_OK


def cmd_morphism_validate(args) -> int:
    m, src, tgt = _morphism_bundle(args)
    if src is None or tgt is None:
        raise InputError("validation needs a source and a target datum")
    v = validate_p_morphism(m, src, tgt)
    if v is not None:
        _emit(args, {"valid": False, "violation": v}, f"invalid: {v}")
        return EXIT_NEGATIVE
    iso = is_p_isogeny(m)
    _emit(args, {"valid": True, "p_isogeny": iso}, f"valid p-morphism{' (p-isogeny)' if iso else ''}")
    return EXIT_OK


def cmd_morphism_steinberg(args) -> int:
    m, _, _ = _morphism_bundle(args)
    w = is_p_steinberg(m, max_order=args.max_order)
    if isinstance(w, NotSteinberg):
        _emit(args, w, f"not p-Steinberg: {w.reason}")
        return EXIT_NEGATIVE
    _emit(args, w, f"p-Steinberg: f^{w.n} = {m.p}^{w.m}·I")
    return EXIT_OK


def cmd_morphism_frobenius(args) -> int:
    m, _, _ = _morphism_bundle(args)
    w = is_p_frobenius(m, max_order=args.max_order)
    if isinstance(w, NotFrobenius):
        _emit(args, w, f"not p-Frobenius: {w.reason}")
        return EXIT_NEGATIVE
    _emit(args, w, f"p-Frobenius: f = {m.p}^{w.a}·φ0 with φ0 of order {w.order}")
    return EXIT_OK


def cmd_morphism_dualize(args) -> int:
    m, _, _ = _morphism_bundle(args)
    print(dumps(to_plain(dualize(m))))
    return EXIT_OK


def cmd_embed_smooth(args) -> int:
    R = datum_from_json(_read(args.file))
    F = _frobenius(args.frobenius, R)
    e = smooth_regular_embedding(R, F, force_construction=args.force_construction)
    print(
        dumps(
            to_plain(
                {
                    "datum": e.datum,
                    "p1": e.p1,
                    "psi": e.psi,
                    "group": {"moduli": list(e.group_moduli)},
                    "certificates": e.certificates,
                }
            )
        )
    )
    return EXIT_OK


def cmd_embed_optimal(args) -> int:
    R = datum_from_json(_read(args.file))
    F = _frobenius(args.frobenius, R)
    if F is None:
        raise InputError("an optimal embedding needs --frobenius")
    e = optimal_embedding(R, F)
    print(
        dumps(
            to_plain(
                {
                    "datum": e.datum,
                    "p1": e.p1,
                    "psi": e.psi,
                    "torus_lift": e.torus_lift,
                    "frobenius": e.frobenius,
                    "commutes": e.commutes,
                }
            )
        )
    )
    return EXIT_OK


def cmd_embed_check(args) -> int:
    if args.suzuki is not None:
        rep = steinberg_obstruction_check(args.suzuki, range(args.s_max + 1))
        payload = {
            "r": rep.r,
            "witness": rep.witness,
            "holds": rep.holds,
            "cases": [
                {
                    "s": c.s,
                    "preserves_lattice": c.preserves_lattice,
                    "verdict": c.verdict,
                    "e2_exponent": c.e2_exponent,
                    "e3_exponent": c.e3_exponent,
                    "parity_certificate": c.parity_certificate,
                }
                for c in rep.cases
            ],
        }
        verdicts = ", ".join("no" if isinstance(c.verdict, NotSteinberg) else "yes" for c in rep.cases)
        _emit(args, payload, f"r = {rep.r}: F* witness {rep.witness}; ψ_s Steinberg for s = 0..{args.s_max}: {verdicts}; obstruction {'holds' if rep.holds else 'fails'}")
        return EXIT_OK if rep.holds else EXIT_NEGATIVE
    if args.file is None:
        raise InputError("embed check needs a morphism file or --suzuki R")
    m, src, tgt = _morphism_bundle(args)
    if src is None or tgt is None:
        raise InputError("embed check needs a source and a target datum")
    F = _frobenius(args.frobenius, tgt)
    rep = classify_embedding(m, src, tgt, args.p, F)
    _emit(args, rep, f"{rep.kind}; torsion {list(rep.torsion)}")
    return EXIT_OK if rep.is_derived else EXIT_NEGATIVE


def _all_true(certs: dict) -> bool:
    return all(v is not False for v in certs.values() if isinstance(v, bool))


def cmd_asai_complete(args) -> int:
    obj = _read(args.file)
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected an object")
    for key in ("R", "R1", "R2", "s1", "s2"):
        if key not in obj:
            raise SchemaError("$", f"missing key {key!r}")
    R = datum_from_json(obj["R"], "$.R")
    R1 = datum_from_json(obj["R1"], "$.R1")
    R2 = datum_from_json(obj["R2"], "$.R2")
    s1 = morphism_from_json(obj["s1"], "$.s1")
    s2 = morphism_from_json(obj["s2"], "$.s2")
    st = None
    if "F" in obj:
        st = tuple(morphism_from_json(obj[k], f"$.{k}") for k in ("F", "F1", "F2"))
    c = complete_embeddings(s1, R1, s2, R2, R, st)
    print(dumps(to_plain({"datum": c.datum, "pi1": c.pi1, "pi2": c.pi2, "psi": c.psi, "certificates": c.certificates, "scope": SCOPE_NOTE})))
    return EXIT_OK if _all_true(c.certificates) else EXIT_NEGATIVE


def cmd_asai_cover(args) -> int:
    R = datum_from_json(_read(args.file))
    F = _frobenius(args.frobenius, R)
    c = smooth_covering(R, F)
    print(dumps(to_plain({"datum": c.datum, "covering": c.covering, "frobenius": c.frobenius, "certificates": c.certificates, "scope": SCOPE_NOTE})))
    return EXIT_OK if _all_true(c.certificates) else EXIT_NEGATIVE


def cmd_asai_cyclic(args) -> int:
    obj = _read(args.file)
    if not isinstance(obj, dict) or "blocks" not in obj or "F" not in obj:
        raise SchemaError("$", "expected an object with 'blocks' and 'F'")
    if not isinstance(obj["blocks"], list):
        raise SchemaError("$.blocks", "expected a list")
    blocks = [datum_from_json(b, f"$.blocks[{i}]") for i, b in enumerate(obj["blocks"])]
    F = morphism_from_json(obj["F"], "$.F")
    c = cyclic_block_embedding(blocks, F)
    print(dumps(to_plain({"datum": c.datum, "h": c.h, "psi": c.psi, "certificates": c.certificates, "scope": SCOPE_NOTE})))
    return EXIT_OK if _all_true(c.certificates) else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="rdk", description="Exact computations with root data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the root-datum axioms")
    p.add_argument("file", nargs="?", default="-")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("catalog", help="print a catalog datum")
    p.add_argument("type", help="Cartan type such as C2 or A1xA2, or a preset (GL3, Sp4, CSp4, SL4, PGL3, T2)")
    p.add_argument("selector", nargs="?", default="sc", help="sc, ad, or a JSON list of weight generators")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("dual", help="print the dual datum")
    p.add_argument("file", nargs="?", default="-")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("cproduct", help="build a central product from a spec")
    p.add_argument("file", nargs="?", default="-")
    p.set_defaults(func=cmd_cproduct)

    p = sub.add_parser("recover", help="derived datum, radical and A of a datum")
    p.add_argument("file", nargs="?", default="-")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("classify", parents=[common], help="classes of central products for a triple")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--budget", type=int, default=None, help="largest Aut(A) to enumerate (default RDK_BUDGET or 200000)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--report", metavar="DIR", default=None, help="also write CSV, JSON and a PNG of the partition")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("isomorphic", parents=[common], help="decide isomorphism of two data")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_isomorphic)

    msub = sub.add_parser("morphism", help="p-morphism checks").add_subparsers(dest="action", required=True)
    for name, func, help_ in (
        ("validate", cmd_morphism_validate, "check the p-morphism identities"),
        ("steinberg", cmd_morphism_steinberg, "decide whether a power is a p-power scalar"),
        ("frobenius", cmd_morphism_frobenius, "decide f = p^a times a finite-order map"),
        ("dualize", cmd_morphism_dualize, "transpose a morphism"),
    ):
        p = msub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file", nargs="?", default="-")
        p.add_argument("--source", default=None)
        p.add_argument("--target", default=None)
        p.add_argument("--max-order", type=int, default=None)
        p.set_defaults(func=func)

    esub = sub.add_parser("embed", help="smooth regular embeddings").add_subparsers(dest="action", required=True)
    p = esub.add_parser("smooth", help="smooth regular embedding of a datum")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--frobenius", default=None, help="split:q=N or a morphism file")
    p.add_argument("--force-construction", action="store_true")
    p.set_defaults(func=cmd_embed_smooth)
    p = esub.add_parser("optimal", help="embedding with centre of the least dimension")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--frobenius", default=None, help="split:q=N or a morphism file")
    p.set_defaults(func=cmd_embed_optimal)
    p = esub.add_parser("check", parents=[common], help="classify an embedding, or run the Suzuki obstruction")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--source", default=None)
    p.add_argument("--target", default=None)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--frobenius", default=None)
    p.add_argument("--suzuki", type=int, default=None, metavar="R", help="check the lifts ψ_s of the Suzuki map with parameter R")
    p.add_argument("--s-max", type=int, default=10)
    p.set_defaults(func=cmd_embed_check)

    asub = sub.add_parser("asai", help="completion, coverings, cyclic blocks").add_subparsers(dest="action", required=True)
    p = asub.add_parser("complete", help="complete two derived embeddings")
    p.add_argument("file", nargs="?", default="-")
    p.set_defaults(func=cmd_asai_complete)
    p = asub.add_parser("cover", help="smooth covering via the dual datum")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--frobenius", default=None)
    p.set_defaults(func=cmd_asai_cover)
    p = asub.add_parser("cyclic", help="cyclic-block embedding")
    p.add_argument("file", nargs="?", default="-")
    p.set_defaults(func=cmd_asai_cyclic)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "budget", None) is not None and args.budget < 0:
        parser.error("--budget must be non-negative")
    try:
        return args.func(args)
    except abelian.BudgetExceeded as exc:
        print(f"rdk: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (
        InputError,
        SchemaError,
        RootDatumError,
        LatticeError,
        MorphismError,
        CentralProductError,
        ClassificationError,
        EmbeddingError,
    ) as exc:
        print(f"rdk: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
