"""Command line interface.

Exit codes: 0 affirmative verdict, 1 negative verdict, 2 input error.
Reports are deterministic apart from the ``timing`` field.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Optional

from . import forms, hodge, sweeps, tropfan
from .errors import HodgekitError, InputError, NotNefError, PreconditionError, TheoremViolation
from .instance import LorentzInstance, NefCollection, load_instance
from .matroid import Matroid
from .serialize import dumps, fmt_vec, scalar, to_jsonable


# -- input helpers -----------------------------------------------------------

def _read_json(path: str, what: str):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read file ({exc.strerror})", what) from None
    try:
        return json.loads(raw), raw
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"invalid JSON ({exc})", what) from None


def parse_vector(text: str, where: str, dim: Optional[int] = None) -> tuple:
    """Comma-separated rationals such as ``1,-1/2,0``."""
    parts = [p.strip().replace("−", "-") for p in text.split(",")]
    try:
        v = tuple(forms.parse_scalar(p) for p in parts)
    except (ValueError, TypeError, ZeroDivisionError):
        raise InputError(f"cannot parse {text!r} as comma-separated rationals", where) from None
    if dim is not None and len(v) != dim:
        raise InputError(f"expected {dim} entries, got {len(v)}", where)
    return v


def _class_from_json(inst: LorentzInstance, obj, where: str) -> tuple:
    if isinstance(obj, dict) and "pl" in obj:
        if inst.fan_model is None:
            raise InputError("PL classes need a fan instance", where)
        fan = inst.fan_model.fan
        vals = obj["pl"]
        if not isinstance(vals, dict):
            raise InputError("'pl' must map ray ids to rationals", where)
        for rid in vals:
            if rid not in fan.rays:
                raise InputError(f"unknown ray {rid!r}", where)
        try:
            phi = fan.pl({k: forms.parse_scalar(v) for k, v in vals.items()})
        except (ValueError, TypeError, ZeroDivisionError):
            raise InputError("bad PL value", where) from None
        return inst.fan_model.from_pl(phi)
    if isinstance(obj, str):
        return parse_vector(obj, where, inst.dim)
    if not isinstance(obj, list):
        raise InputError("class must be a list of rationals or {'pl': {...}}", where)
    try:
        v = tuple(forms.parse_scalar(x) for x in obj)
    except (ValueError, TypeError, ZeroDivisionError):
        raise InputError("bad rational entry", where) from None
    if len(v) != inst.dim:
        raise InputError(f"expected {inst.dim} entries, got {len(v)}", where)
    return v


def load_collection(inst: LorentzInstance, obj) -> NefCollection:
    items = obj.get("classes") if isinstance(obj, dict) else obj
    if not isinstance(items, list):
        raise InputError("expected a list of classes or {'classes': [...]}", "collection")
    classes = [_class_from_json(inst, c, f"collection.classes[{k}]") for k, c in enumerate(items)]
    for k, c in enumerate(classes):
        try:
            inst.certify_nef(c)
        except NotNefError as exc:
            raise NotNefError(f"collection.classes[{k}]: {exc}", witness=exc.witness) from None
    return NefCollection.create(inst, classes)


def _cli_class(inst: LorentzInstance, text: str, where: str) -> tuple:
    text = text.strip()
    if text.startswith("{") or text.startswith("["):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON ({exc})", where) from None
        return _class_from_json(inst, obj, where)
    return parse_vector(text, where, inst.dim)


# -- reports -----------------------------------------------------------------

class Report:
    def __init__(self, command: str, digest_parts: list):
        self.command = command
        h = hashlib.sha256()
        for part in digest_parts:
            h.update(part if isinstance(part, bytes) else str(part).encode())
            h.update(b"\0")
        self.digest = h.hexdigest()
        self.verdict = None
        self.certificate = {}
        self.lines: list = []
        self.start = time.perf_counter()

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs_digest": self.digest,
            "verdict": self.verdict,
            "certificate": to_jsonable(self.certificate),
            "timing": {"seconds": round(time.perf_counter() - self.start, 3)},
        }

    def emit(self, as_json: bool, out):
        if as_json:
            out.write(dumps(self.as_dict()) + "\n")
            return
        out.write(f"{self.command}: {self.verdict}\n")
        for line in self.lines:
            out.write(line + "\n")
        out.write(f"inputs: {self.digest[:16]}\n")
        out.write(f"time: {time.perf_counter() - self.start:.3f}s\n")


def _subset_str(s) -> str:
    return "{" + ",".join(str(i) for i in s) + "}"


# -- commands ----------------------------------------------------------------

def cmd_lorentzian(args, rep: Report) -> int:
    fobj, _ = _read_json(args.form, "form")
    f = forms.HomogeneousForm.from_json(fobj)
    cobj, _ = _read_json(args.cone, "cone")
    gens = cobj.get("generators") if isinstance(cobj, dict) else cobj
    if not isinstance(gens, list) or not gens:
        raise InputError("expected a nonempty list of generators", "cone.generators")
    vecs = []
    for k, g in enumerate(gens):
        if not isinstance(g, list):
            raise InputError("generator must be a list", f"cone.generators[{k}]")
        try:
            v = tuple(forms.parse_scalar(x) for x in g)
        except (ValueError, TypeError, ZeroDivisionError):
            raise InputError("bad rational entry", f"cone.generators[{k}]") from None
        if len(v) != f.dim:
            raise InputError(f"expected {f.dim} entries, got {len(v)}", f"cone.generators[{k}]")
        vecs.append(v)
    res = forms.is_c_lorentzian(f, vecs)
    rep.verdict = "LORENTZIAN" if res.verdict else "NOT_LORENTZIAN"
    rep.certificate = {"reason": res.reason, "witness": res.witness, "certificate": res.certificate}
    rep.lines.append(f"reason: {res.reason}")
    if res.witness is not None:
        rep.lines.append(f"witness: {json.dumps(to_jsonable(res.witness), sort_keys=True)}")
    return 0 if res.verdict else 1


def _instance_and_collection(args, rep: Report):
    iobj, _ = _read_json(args.instance, "instance")
    inst = load_instance(iobj)
    cobj, _ = _read_json(args.collection, "collection")
    coll = load_collection(inst, cobj)
    return inst, coll


def cmd_classify(args, rep: Report) -> int:
    inst, coll = _instance_and_collection(args, rep)
    r = hodge.classify(coll)
    rep.verdict = r.status + (" (vacuous)" if r.vacuous else "")
    rep.certificate = r
    rep.lines.append(f"instance: {inst.label}, n = {inst.degree}, m = {coll.m}")
    for s, k in r.nd_table.items():
        rep.lines.append(f"  nd(L_{_subset_str(s)}) = {k}")
    if r.violating:
        rep.lines.append(f"violating subset: {_subset_str(r.violating)}")
    if r.maximal_critical:
        rep.lines.append("maximal critical subsets: " + ", ".join(_subset_str(s) for s in r.maximal_critical))
    if r.maximal_subcritical is not None:
        rep.lines.append(f"maximal subcritical subset: {_subset_str(r.maximal_subcritical)}")
    return 1 if r.status == hodge.NOT_SUBCRITICAL else 0


def _check_codim_two(inst, coll):
    if coll.m != inst.degree - 2:
        raise InputError(f"need {inst.degree - 2} classes, got {coll.m}", "collection")


def cmd_hl(args, rep: Report) -> int:
    inst, coll = _instance_and_collection(args, rep)
    _check_codim_two(inst, coll)
    h = hodge.hl_check(coll)
    cert = {
        "kernel": h.kernel,
        "v_eff": {"basis": h.v_eff.basis, "labels": h.v_eff.labels},
        "v_deg_probe": {"basis": h.v_deg.basis, "pairs": h.v_deg.pairs,
                        "menu_size": h.v_deg.menu_size, "lower_bound": True},
        "hypothesis": h.hypothesis,
        "ordering": h.ordering,
        "kernel_equals_v_eff": h.kernel_is_eff,
        "kernel_equals_v_eff_plus_v_deg_probe": h.kernel_is_eff_plus_deg,
        "hard_lefschetz": h.hard_lefschetz,
    }
    if args.flags:
        if hodge.classify(coll).status == hodge.SUPERCRITICAL:
            cert["flags"] = hodge.flag_collections(coll)
        else:
            cert["flags"] = "skipped: collection is not supercritical"
    rep.verdict = "HL" if h.hard_lefschetz else "NOT_HL"
    rep.certificate = cert
    rep.lines.append(f"kernel: {[fmt_vec(v) for v in h.kernel]}")
    rep.lines.append(f"V_eff: {[fmt_vec(v) for v in h.v_eff.basis]} from {h.v_eff.labels}")
    rep.lines.append(f"V_deg probe (lower bound): {[fmt_vec(v) for v in h.v_deg.basis]}")
    rep.lines.append(f"ker = V_eff: {h.kernel_is_eff}; ker = V_eff + V_deg probe: {h.kernel_is_eff_plus_deg}")
    if h.hypothesis:
        rep.lines.append(f"hypothesis confirmed: {h.hypothesis}")
    flags = cert.get("flags")
    if isinstance(flags, hodge.FlagReport):
        rep.lines.append(f"flags: {len(flags.flags)} checked, sum of kernels = V_eff: {flags.ok}")
    elif flags is not None:
        rep.lines.append(f"flags: {flags}")
    return 0 if h.hard_lefschetz else 1


def cmd_local_hii(args, rep: Report) -> int:
    inst, coll = _instance_and_collection(args, rep)
    _check_codim_two(inst, coll)
    alpha = _cli_class(inst, args.alpha, "--alpha")
    cert = hodge.local_hii(coll, args.r, alpha)
    rep.verdict = "VERIFIED" if cert.verified else "NOT_VERIFIED"
    rep.certificate = cert
    rep.lines.append(f"beta: {fmt_vec(cert.beta)}")
    rep.lines.append(f"beta - alpha over: {cert.kernel_side}")
    rep.lines.append(f"-D.beta^2.L: {fmt_vec(cert.negated)}")
    return 0 if cert.verified else 1


def _degree_terms(fan, text: str) -> list:
    """``alpha^2*beta;F1*F1_2`` -> list of lists of PL vectors."""
    alpha, beta = tropfan.bergman_alpha_beta(fan)
    out = []
    for k, mono in enumerate(t for t in text.split(";") if t.strip()):
        factors = []
        for tok in mono.split("*"):
            tok = tok.strip()
            name, _, power = tok.partition("^")
            try:
                p = int(power) if power else 1
            except ValueError:
                raise InputError(f"bad exponent in {tok!r}", f"--degree[{k}]") from None
            if name == "alpha":
                v = alpha
            elif name == "beta":
                v = beta
            elif name in fan.rays:
                v = fan.indicator(name)
            else:
                raise InputError(f"unknown class {name!r}", f"--degree[{k}]")
            factors.extend([v] * p)
        if len(factors) != fan.dim:
            raise InputError(f"monomial has degree {len(factors)}, fan dimension is {fan.dim}", f"--degree[{k}]")
        out.append((mono.strip(), factors))
    return out


def cmd_bergman(args, rep: Report) -> int:
    mobj, _ = _read_json(args.matroid, "matroid")
    m = Matroid.from_json(mobj)
    fan, omega = tropfan.bergman(m)
    bal = tropfan.check_balanced(fan, omega)
    maximal = [c for c in fan.maximal if len(c) == fan.dim]
    flag_ok = all(tropfan.degree(fan, omega, [fan.indicator(fan.rays[i]) for i in c], check=False) == omega[c]
                  for c in maximal)
    cert = {
        "ground_set": m.n, "rank": m.r,
        "rays": list(fan.rays),
        "cones_by_dim": {str(k): len(fan.cones_of_dim(k)) for k in range(1, fan.dim + 1)},
        "dim": fan.dim,
        "balanced": bool(bal),
        "flag_monomials": {"count": len(maximal), "all_equal_weight": flag_ok},
        "mu_sequence": m.mu_sequence(),
    }
    ok = bool(bal) and flag_ok
    if args.check_lorentzian:
        lv = tropfan.lorentzian_fan_check(fan, omega)
        cert["lorentzian"] = {"verdict": lv.verdict, "reason": lv.reason, "witness": lv.witness,
                              "stars": len(lv.certificate or [])}
        ok = ok and lv.verdict
    if args.degree:
        cert["degrees"] = {mono: tropfan.degree(fan, omega, factors, check=False)
                           for mono, factors in _degree_terms(fan, args.degree)}
    rep.verdict = "OK" if ok else "FAILED"
    rep.certificate = cert
    rep.lines.append(f"fan: {len(fan.rays)} rays, dimension {fan.dim}, cones {cert['cones_by_dim']}")
    rep.lines.append(f"balanced: {bool(bal)}; flag monomial degrees equal weights: {flag_ok}")
    rep.lines.append(f"mu sequence: {cert['mu_sequence']}")
    if "lorentzian" in cert:
        rep.lines.append(f"lorentzian: {cert['lorentzian']['verdict']}")
    for mono, val in cert.get("degrees", {}).items():
        rep.lines.append(f"deg({mono}) = {scalar(val)}")
    return 0 if ok else 1


def cmd_logconcave(args, rep: Report) -> int:
    iobj, _ = _read_json(args.instance, "instance")
    inst = load_instance(iobj)
    A = _cli_class(inst, args.A, "--A")
    B = _cli_class(inst, args.B, "--B")
    for name, v in (("--A", A), ("--B", B)):
        try:
            inst.certify_nef(v)
        except NotNefError as exc:
            raise NotNefError(f"{name}: {exc}", witness=exc.witness) from None
    res = hodge.logconcavity(inst, A, B, certified=True)
    cert = {"sequence": res.sequence, "logconcave": res.logconcave,
            "equalities": res.equalities, "extremals": res.extremals}
    if args.collection:
        cobj, _ = _read_json(args.collection, "collection")
        coll = load_collection(inst, cobj)
        _check_codim_two(inst, coll)
        cert["hodge_index"] = hodge.hodge_index_extremal(coll, A, B, certified=True)
    rep.verdict = "LOG_CONCAVE" if res.logconcave else "NOT_LOG_CONCAVE"
    rep.certificate = cert
    rep.lines.append("a_k: (" + ", ".join(scalar(a) for a in res.sequence) + ")")
    rep.lines.append(f"equality indices: {res.equalities}")
    for e in res.extremals:
        rep.lines.append(f"  k = {e.k}: c = {scalar(e.c)}, A - cB = {fmt_vec(e.difference)}, in V_eff: {e.in_v_eff}")
    if "hodge_index" in cert:
        hi = cert["hodge_index"]
        rep.lines.append(f"hodge index gap: {scalar(hi.gap)}" + (f", c = {scalar(hi.c)}" if hi.c is not None else ""))
    return 0 if res.logconcave else 1


def cmd_sweep(args, rep: Report) -> int:
    names = tuple(args.instances.split(",")) if args.instances else ("DT3", "DT4", "SYM3")
    for n in names:
        if n not in ("DT3", "DT4", "DT5", "SYM3", "U45"):
            raise InputError(f"unknown instance {n!r}", "--instances")
    results = sweeps.run_all(args.trials, None, names)
    ok = all(r.ok for r in results)
    rep.verdict = "PASS" if ok else "FAIL"
    rep.certificate = {"seed": sweeps.seed(), "results": [
        {"name": r.name, "instance": r.instance, "trials": r.trials, "failures": r.failures} for r in results]}
    for r in results:
        rep.lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.name} [{r.instance}] trials={r.trials}")
    return 0 if ok else 1


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hodgekit", description="Exact checks for Lorentzian intersection forms.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable report")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("lorentzian", cmd_lorentzian, "test a form for the Lorentzian property on a cone")
    sp.add_argument("--form", required=True)
    sp.add_argument("--cone", required=True)
    sp = add("classify", cmd_classify, "criticality of a nef collection")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--collection", required=True)
    sp = add("hl", cmd_hl, "kernel, effective kernel and hard Lefschetz verdict")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--collection", required=True)
    sp.add_argument("--flags", action="store_true", help="also sweep all full flags")
    sp = add("local-hii", cmd_local_hii, "local Hodge index correction of a kernel class")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--collection", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--alpha", required=True)
    sp = add("bergman", cmd_bergman, "Bergman fan summary of a matroid")
    sp.add_argument("--matroid", required=True)
    sp.add_argument("--check-lorentzian", action="store_true")
    sp.add_argument("--degree", help="monomials like 'alpha^2*beta;F1*F1_2'")
    sp = add("logconcave", cmd_logconcave, "mixed sequence of two nef classes")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--collection", help="also run the Hodge index extremal test for this product")
    sp = add("sweep", cmd_sweep, "randomized property sweeps (seed from HODGEKIT_SEED)")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--instances", help="comma-separated subset of DT3,DT4,DT5,SYM3,U45")
    return p


def _digest_parts(argv: list) -> list:
    parts = list(argv)
    for i, a in enumerate(argv[:-1]):
        if a in ("--form", "--cone", "--instance", "--collection", "--matroid"):
            try:
                with open(argv[i + 1], "rb") as fh:
                    parts.append(fh.read())
            except OSError:
                pass
    return parts


def main(argv: Optional[list] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    rep = Report(args.command, _digest_parts(argv))
    try:
        code = args.fn(args, rep)
    except (InputError, PreconditionError) as exc:
        return _error(rep, args.json, out, err, 2, exc)
    except TheoremViolation as exc:
        return _error(rep, args.json, out, err, 1, exc, kind="theorem-violation")
    except HodgekitError as exc:
        return _error(rep, args.json, out, err, 2, exc)
    except (KeyError, TypeError, ValueError, IndexError, RecursionError) as exc:
        # malformed input that slipped past field validation
        return _error(rep, args.json, out, err, 2, exc)
    rep.emit(args.json, out)
    return code


def _error(rep: Report, as_json: bool, out, err, code: int, exc, kind: str = "input-error") -> int:
    witness = getattr(exc, "witness", None)
    if as_json:
        rep.verdict = "ERROR"
        rep.certificate = {"kind": kind, "message": str(exc), "field": getattr(exc, "field", None),
                           "witness": witness}
        rep.emit(True, out)
    else:
        err.write(f"error ({kind}): {exc}\n")
        if witness is not None:
            err.write(f"witness: {json.dumps(to_jsonable(witness), sort_keys=True)}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
