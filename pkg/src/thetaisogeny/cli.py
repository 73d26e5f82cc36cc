"""Command line front end.

Every command reads JSON files, prints a short report and, with ``--out``,
writes a JSON envelope holding the context, the result and a provenance
block.  Output is a pure function of the inputs and flags.

Exit codes: 0 success, 1 I/O or schema error, 2 invalid input null point or
bad usage, 3 mathematical failure (no root, degenerate data, ...), 4 budget.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field

from . import __version__
from .errors import BudgetExceeded, MathFailure, SchemaError, ThetaError
from .galois_field import FieldContext
from .index_space import ThetaContext
from .isogeny_eval import (
    CompressedPoint,
    IsogenyData,
    compress,
    decompress,
    isogeny_image,
)
from .modular_velu import (
    DEFAULT_BUDGET,
    KernelSpec,
    all_modular_points,
    brute_torsion_search,
    sum_choices,
    velu_reconstruct,
)
from .pairing import commutator_pairing, discrete_log, sum_lift
from .theta_core import AffineThetaPoint, ThetaNullPoint, projective_eq, validate_null_point

ENVELOPE_FORMAT = "theta-job/1"
KERNEL_FORMAT = "theta-kernel/1"


class UsageError(ThetaError):
    pass


@dataclass
class JobConfig:
    field_spec: dict | None = None
    g: int | None = None
    n: int | None = None
    ell: int | None = None
    zeta_ln: str | None = None
    inputs: list = field(default_factory=list)
    out: str | None = None
    budget: int = DEFAULT_BUDGET
    roots: list | None = None

    def context(self, fallback=None):
        """ThetaContext from the flags, completed by the context block of an input file."""
        fb = fallback or {}
        fdesc = self.field_spec or fb.get("field")
        g = self.g or fb.get("g")
        n = self.n or fb.get("n")
        ell = self.ell if self.ell is not None else fb.get("ell")
        if fdesc is None or g is None or n is None:
            raise UsageError("need --field, --g and --n (or an input file carrying its context)")
        F = FieldContext.from_dict(fdesc)
        zeta = self.zeta_ln
        fb_field = fb.get("field") or {}
        # a context over F_p carries its roots into any extension of F_p
        same = (
            fb_field.get("p") == F.p
            and (fb_field == F.to_dict() or fb_field.get("d", 1) == 1)
            and fb.get("ell") == ell
            and fb.get("n") == n
        )
        if zeta is None and same:
            zeta = fb.get("zeta_ln")
        try:
            return ThetaContext(F, g, n, ell, None if zeta is None else F.parse(zeta))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


def parse_field(text):
    """``p``, ``p,d`` or ``p,d,c0:c1:...:cd`` (modulus low degree first)."""
    parts = text.split(",")
    try:
        out = {"p": int(parts[0]), "d": int(parts[1]) if len(parts) > 1 else 1}
        if len(parts) > 2:
            out["modulus_poly"] = [int(c) for c in parts[2].split(":")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad field spec {text!r}") from exc
    if len(parts) > 3:
        raise argparse.ArgumentTypeError(f"bad field spec {text!r}")
    return out


def context_to_dict(ctx):
    out = ctx.to_dict()
    out["field"] = ctx.field.to_dict()
    return out


# ---------------------------------------------------------------------------
# file handling


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def file_digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _payload(data, *keys):
    """The record itself, or the first of ``keys`` inside an envelope's result."""
    if not isinstance(data, dict):
        raise SchemaError("expected a JSON object")
    if data.get("format") == ENVELOPE_FORMAT:
        result = data.get("result", {})
        for k in keys:
            if k in result:
                return result[k]
        raise SchemaError(f"envelope has none of {keys}")
    return data


def load_point(ctx, data, null=False):
    rec = _payload(data, "null_point", "point")
    pt = AffineThetaPoint.from_json(ctx, rec)
    return ThetaNullPoint.from_point(pt) if null else pt


def load_points(ctx, data):
    recs = _payload(data, "points", "basis")
    if isinstance(recs, dict):
        recs = recs.get("points", recs.get("basis"))
    if not isinstance(recs, list):
        raise SchemaError("expected a list of points")
    return [AffineThetaPoint.from_json(ctx, r) for r in recs]


def envelope(ctx, command, result, cfg, extra=None):
    prov = {
        "tool": "thetaisogeny",
        "version": __version__,
        "command": command,
        "inputs": [{"path": p, "sha256": file_digest(p)} for p in cfg.inputs],
    }
    prov.update(extra or {})
    return {
        "format": ENVELOPE_FORMAT,
        "context": context_to_dict(ctx),
        "result": result,
        "provenance": prov,
    }


def emit(cfg, doc):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise SchemaError(f"cannot write {cfg.out}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def _first_context(paths):
    for p in paths:
        data = read_json(p)
        if isinstance(data, dict) and isinstance(data.get("context"), dict):
            return data["context"]
    return None


def cmd_validate(cfg, args):
    ctx = cfg.context(_first_context([args.null]))
    null = load_point(ctx, read_json(args.null), null=True)
    report = validate_null_point(null)
    if report.ok:
        print("VALID" + (" (suspect: degenerate classes)" if report.suspect else ""))
    else:
        first = report.violations[0] if report.violations else ("zero vector",)
        print("INVALID")
        print("first violation: " + " ".join(str(v) for v in first))
    result = {"valid": report.ok, "suspect": report.suspect, "checked": report.checked,
              "violations": [[str(v) for v in viol] for viol in report.violations]}
    emit(cfg, envelope(ctx, "validate", result, cfg))
    return 0 if report.ok else 2


def cmd_torsion(cfg, args):
    ctx = cfg.context(_first_context([args.null]))
    null = load_point(ctx, read_json(args.null), null=True)
    pts = brute_torsion_search(null, cfg.ell or ctx.ell, budget=cfg.budget)
    print(f"{len(pts)} torsion points")
    for p in pts:
        print(" ".join(str(c) for c in p.coords))
    emit(cfg, envelope(ctx, "torsion", {"points": [p.to_json() for p in pts]}, cfg))
    return 0


def _kernel(ctx, data, null):
    rec = _payload(data, "kernel")
    if rec.get("format", KERNEL_FORMAT) != KERNEL_FORMAT:
        raise SchemaError("unknown kernel format")
    try:
        basis = [AffineThetaPoint.from_json(ctx, r) for r in rec["basis"]]
        given = [AffineThetaPoint.from_json(ctx, r) for r in rec.get("sums", [])]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad kernel record: {exc}") from exc
    keys = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    if given and len(given) != len(keys):
        raise SchemaError(f"kernel needs {len(keys)} sums")
    sums = dict(zip(keys, given)) if given else sum_choices(basis, null)
    return KernelSpec(basis, sums)


def cmd_velu(cfg, args):
    ctx = cfg.context(_first_context([args.null, args.kernel]))
    if ctx.ell is None:
        raise UsageError("velu needs --ell")
    null = load_point(ctx, read_json(args.null), null=True)
    K = _kernel(ctx, read_json(args.kernel), null)
    roots = None if cfg.roots is None else [ctx.field.parse(r) for r in cfg.roots]
    res = velu_reconstruct(K, null, roots=roots)
    report = validate_null_point(res.null_A)
    print("VALID" if report.ok else "INVALID")
    print(" ".join(str(c) for c in res.null_A.coords))
    choices = [str(r) for r in res.root_choices]
    emit(cfg, envelope(ctx, "velu", {"null_point": res.null_A.to_json()}, cfg, {"root_choices": choices}))
    return 0


def cmd_isogeny(cfg, args):
    ctx = cfg.context(_first_context([args.null_a, args.point]))
    null_A = load_point(ctx, read_json(args.null_a), null=True)
    iso = IsogenyData(null_A)
    y = load_point(ctx, read_json(args.point))
    C = isogeny_image(y, iso)
    image = decompress(C, iso)
    kernel = projective_eq(iso.null_A, image)[0]
    print("KERNEL" if kernel else "IMAGE")
    print(" ".join(str(c) for c in image.coords))
    result = {"kernel": kernel, "point": image.to_json(), "compressed": C.to_json(ctx)}
    emit(cfg, envelope(ctx, "isogeny", result, cfg))
    return 0


def cmd_compress(cfg, args):
    ctx = cfg.context(_first_context([args.null_a, args.point]))
    null_A = load_point(ctx, read_json(args.null_a), null=True)
    IsogenyData(null_A)
    x = load_point(ctx, read_json(args.point))
    C = compress(x)
    print(f"{C.size()} coordinates in {len(C.blocks)} blocks")
    emit(cfg, envelope(ctx, "compress", {"compressed": C.to_json(ctx)}, cfg))
    return 0


def cmd_decompress(cfg, args):
    ctx = cfg.context(_first_context([args.null_a, args.compressed]))
    null_A = load_point(ctx, read_json(args.null_a), null=True)
    iso = IsogenyData(null_A)
    C = CompressedPoint.from_json(ctx, _payload(read_json(args.compressed), "compressed"))
    x = decompress(C, iso)
    print(" ".join(str(c) for c in x.coords))
    emit(cfg, envelope(ctx, "decompress", {"point": x.to_json()}, cfg))
    return 0


def cmd_pairing(cfg, args):
    paths = [args.null, args.p, args.q] + ([args.sum] if args.sum else [])
    ctx = cfg.context(_first_context(paths))
    if ctx.ell is None:
        raise UsageError("pairing needs --ell")
    null = load_point(ctx, read_json(args.null), null=True)
    P = load_point(ctx, read_json(args.p))
    Q = load_point(ctx, read_json(args.q))
    PQ = load_point(ctx, read_json(args.sum)) if args.sum else sum_lift(P, Q, null)
    value = commutator_pairing(P, Q, PQ, null).value
    result = {"value": str(value)}
    print(value)
    if args.log:
        k = discrete_log(value, ctx.zeta_ell, ctx.ell)
        result.update({"log": k, "zeta_ell": str(ctx.zeta_ell)})
        print(f"log base {ctx.zeta_ell}: {k}")
    emit(cfg, envelope(ctx, "pairing", result, cfg))
    return 0


def cmd_all_isogenies(cfg, args):
    ctx = cfg.context(_first_context([args.null, args.basis]))
    if ctx.ell is None:
        raise UsageError("all-isogenies needs --ell")
    null = load_point(ctx, read_json(args.null), null=True)
    basis = load_points(ctx, read_json(args.basis))
    found = all_modular_points(basis, null)
    rows = []
    for gens, nA in found:
        ok = validate_null_point(nA).ok
        print(("VALID " if ok else "INVALID ") + " ".join(str(c) for c in nA.coords))
        rows.append({"kernel": [list(g) for g in gens], "null_point": nA.to_json(), "valid": ok})
    print(f"{len(found)} modular points")
    emit(cfg, envelope(ctx, "all-isogenies", {"modular_points": rows}, cfg))
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=parse_field, help="p[,d[,c0:c1:...]]")
    common.add_argument("--g", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--ell", type=int)
    common.add_argument("--zeta", help="primitive (ell n)-th root of unity to use")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--roots", help="semicolon separated root choices for velu")
    common.add_argument("--out", help="write the JSON envelope here")

    parser = argparse.ArgumentParser(prog="thetaisogeny", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, *positional):
        sp = sub.add_parser(name, parents=[common])
        for arg in positional:
            sp.add_argument(arg)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "null")
    add("torsion", cmd_torsion, "null")
    add("velu", cmd_velu, "null", "kernel")
    add("isogeny", cmd_isogeny, "null_a", "point")
    add("compress", cmd_compress, "null_a", "point")
    add("decompress", cmd_decompress, "null_a", "compressed")
    sp = add("pairing", cmd_pairing, "null", "p", "q")
    sp.add_argument("--sum", help="a lift of p + q")
    sp.add_argument("--log", action="store_true", help="also print the log base zeta_ell")
    add("all-isogenies", cmd_all_isogenies, "null", "basis")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    paths = [v for k, v in vars(args).items() if k in ("null", "kernel", "null_a", "point", "compressed",
                                                       "p", "q", "sum", "basis") and v]
    cfg = JobConfig(
        field_spec=args.field,
        g=args.g,
        n=args.n,
        ell=args.ell,
        zeta_ln=args.zeta,
        inputs=paths,
        out=args.out,
        budget=args.budget,
        roots=None if args.roots is None else [r.strip() for r in args.roots.split(";")],
    )
    try:
        return args.func(cfg, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 4
    except MathFailure as exc:
        print(f"mathematical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3
    except (SchemaError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
