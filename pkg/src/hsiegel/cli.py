"""Command line interface: hsiegel <command> --config PATH [options].

The config is a flat ``key = value`` file (``#`` starts a comment):

    d = 2                 # F = Q(sqrt d)
    a = -1                # D = (a, b / F)
    b = -1
    order = 1,0,0,0; w/2,w/2,0,0; w/2,0,w/2,0; 1/2,1/2,1/2,1/2
    aux_prime = w         # prime used to build the class representatives
    level = 3+w           # generator of the level (1 for level one)
    parahoric = siegel
    max_norm = 9
    format = table

Field elements are expressions in integers and w = omega_d.  The order line
lists four O_F-basis elements by their coefficients on 1, i, j, k; without
it the standard order for d is used.  Command line flags override the file.

Exit codes: 0 success, 2 config error, 3 verification mismatch.
"""
from __future__ import annotations

import argparse
import ast
import copy
import hashlib
import json
import logging
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .exactnum import FieldElement, Ideal, PrimeIdeal, QuadraticField, narrow_class_number_one, primes_up_to_norm
from .flags import VARIANTS, FlagSpace, brute_force_count, flag_count_formula
from .hecke import (BrandtMatrix, Eigensystem, NeighborStore, brandt_matrix, build_module, degree,
                    eisenstein_and_cusp, eigensystems, sk_detect)
from .hermlat import ClassSet, HermitianMatrix, LatticeRep, enumerate_classes, mass
from .neighbors import NeighborData
from .quatalg import QuatAlgebra, QuatOrder, hamilton_order, ramified_primes, verify_maximal_order

log = logging.getLogger("hsiegel")

SCHEMA = 1
COMMANDS = ("classes", "mass", "flags", "brandt", "eigensystems", "verify-paper")
EXIT_OK, EXIT_CONFIG, EXIT_MISMATCH = 0, 2, 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- expressions

def parse_field_expr(F: QuadraticField, text: str) -> FieldElement:
    """Evaluate an expression in integers and w (w = omega_d) with + - * / and integer powers."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as e:
        raise ConfigError(f"cannot parse {text!r}: {e.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return F(node.value)
        if isinstance(node, ast.Name) and node.id == "w":
            return F.omega
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ConfigError(f"exponent must be an integer in {text!r}")
                return ev(node.left) ** node.right.value
            l, r = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return l + r
            if isinstance(node.op, ast.Sub):
                return l - r
            if isinstance(node.op, ast.Mult):
                return l * r
            if isinstance(node.op, ast.Div):
                if not r:
                    raise ConfigError(f"division by zero in {text!r}")
                return l / r
        raise ConfigError(f"unsupported syntax in {text!r}")

    return ev(tree)


# ---------------------------------------------------------------- config

@dataclass
class JobConfig:
    d: int = 2
    a: str = "-1"
    b: str = "-1"
    order: str | None = None
    aux_prime: str | None = None
    level: str = "1"
    parahoric: str = "siegel"
    max_norm: int = 9
    format: str = "table"
    cache: str | None = None
    source: dict = field(default_factory=dict)

    # derived objects, filled in by resolve()
    def resolve(self) -> "Job":
        return Job(self)


_KEYS = {"d", "a", "b", "order", "aux_prime", "level", "parahoric", "max_norm", "format"}


def load_config(path: str | os.PathLike) -> JobConfig:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    return parse_config(text)


def parse_config(text: str) -> JobConfig:
    raw = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        if k not in _KEYS:
            raise ConfigError(f"line {n}: unknown key {k!r} (known: {', '.join(sorted(_KEYS))})")
        if k in raw:
            raise ConfigError(f"line {n}: duplicate key {k!r}")
        raw[k] = v
    cfg = JobConfig(source=dict(raw))
    for k, v in raw.items():
        if k in ("d", "max_norm"):
            try:
                v = int(v)
            except ValueError:
                raise ConfigError(f"{k} must be an integer, got {v!r}") from None
        setattr(cfg, k, v)
    return cfg


def format_config(cfg: JobConfig) -> str:
    """Inverse of parse_config for the keys that are set."""
    lines = []
    for k in ("d", "a", "b", "order", "aux_prime", "level", "parahoric", "max_norm", "format"):
        v = getattr(cfg, k)
        if v is not None:
            lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


class Job:
    """A validated config with the field, order and level objects."""

    def __init__(self, cfg: JobConfig):
        self.cfg = cfg
        if cfg.parahoric not in VARIANTS:
            raise ConfigError(f"parahoric must be one of {', '.join(VARIANTS)}")
        if cfg.format not in ("json", "table"):
            raise ConfigError("format must be json or table")
        if cfg.max_norm < 1:
            raise ConfigError("max_norm must be positive")
        try:
            self.F = F = QuadraticField(cfg.d)
        except ValueError as e:
            raise ConfigError(f"d: {e}") from None
        if not narrow_class_number_one(F):
            raise ConfigError(f"Q(sqrt {cfg.d}) has narrow class number > 1; only h+ = 1 is supported")
        a, b = parse_field_expr(F, cfg.a), parse_field_expr(F, cfg.b)
        D = QuatAlgebra(F, a, b)
        fin, inf = ramified_primes(D)
        if fin:
            raise ConfigError("D must be unramified at all finite primes (Sigma empty); "
                              f"it ramifies at {', '.join(P.label() for P in fin)}")
        if len(inf) != 2:
            raise ConfigError("D must be definite (ramified at both real places)")
        if cfg.order is None:
            if (a, b) != (F(-1), F(-1)):
                raise ConfigError("give an order basis for algebras other than (-1, -1)")
            O = hamilton_order(cfg.d)
        else:
            rows = [r for r in cfg.order.split(";") if r.strip()]
            if len(rows) != 4 or any(len(r.split(",")) != 4 for r in rows):
                raise ConfigError("order must list 4 elements with 4 coefficients each")
            basis = [D(*[parse_field_expr(F, c) for c in r.split(",")]) for r in rows]
            try:
                O = QuatOrder(D, basis)
            except (ValueError, ArithmeticError) as e:
                raise ConfigError(f"order: {e}") from None
        if not verify_maximal_order(O, D):
            raise ConfigError("the order is not maximal")
        self.O = O
        self.aux_prime = self._prime(cfg.aux_prime, "aux_prime") if cfg.aux_prime else None
        lv = parse_field_expr(F, cfg.level)
        if not lv or not lv.is_integral():
            raise ConfigError("level must be a nonzero integral element")
        I = Ideal.principal(lv)
        if I.norm_int == 1:
            self.level = None
        else:
            self.level = self._prime(cfg.level, "level")
            if self.level.norm_int % 2 == 0:
                raise ConfigError("the level must be an odd prime")
            if self.aux_prime is not None and self.aux_prime == self.level:
                raise ConfigError("aux_prime must differ from the level")

    def _prime(self, text: str, key: str) -> PrimeIdeal:
        x = parse_field_expr(self.F, text)
        if not x or not x.is_integral():
            raise ConfigError(f"{key} must be a nonzero integral element")
        I = Ideal.principal(x)
        fac = I.factor()
        if len(fac) != 1 or next(iter(fac.values())) != 1:
            raise ConfigError(f"{key} = {text} does not generate a prime ideal")
        return next(iter(fac))

    @property
    def level_label(self) -> str:
        return "1" if self.level is None else self.level.label()

    def cache_key(self) -> str:
        O = self.O
        parts = [str(self.cfg.d), str(O.D.a), str(O.D.b)]
        parts += [";".join(str(c) for c in b.c) for b in O.of_basis]
        parts.append(self.aux_prime.label() if self.aux_prime else "-")
        return hashlib.sha256("|".join(parts).encode()).hexdigest()[:16]


# ---------------------------------------------------------------- cache

def _s(v) -> str:
    return str(int(v))


def _ints(a) -> list[str]:
    return [_s(v) for v in np.asarray(a).reshape(-1)]


def _fe_json(x: FieldElement) -> list[str]:
    return [str(x.x), str(x.y)]


def _fe_load(F, v) -> FieldElement:
    return F(Fraction(v[0]), Fraction(v[1]))


def classset_to_json(cs: ClassSet) -> dict:
    out = []
    for L in cs.classes:
        g = L.gamma
        out.append({
            "s": _fe_json(g.s), "t": _fe_json(g.t), "r": [_fe_json(c) for c in g.r.c],
            "alpha_num": _ints(L.alpha_num), "alpha_den": _s(L.alpha_den),
            "stabilizer": _ints(L.stabilizer), "stabilizer_order": _s(len(L.stabilizer)),
        })
    return {"classes": out, "mass": str(cs.mass),
            "aux_prime": _fe_json(cs.aux_prime.tp_generator()) if cs.aux_prime else None}


def classset_from_json(O: QuatOrder, d: dict) -> ClassSet:
    F, D = O.F, O.D
    classes = []
    for c in d["classes"]:
        gam = HermitianMatrix(_fe_load(F, c["s"]), D(*[_fe_load(F, v) for v in c["r"]]), _fe_load(F, c["t"]))
        stab = np.array([int(v) for v in c["stabilizer"]], dtype=np.int64).reshape(-1, 2, 2, 8)
        if len(stab) != int(c["stabilizer_order"]):
            raise ValueError("stabilizer length mismatch in cache")
        classes.append(LatticeRep(O, gam, np.array([int(v) for v in c["alpha_num"]], dtype=np.int64).reshape(2, 2, 8),
                                  int(c["alpha_den"]), stab))
    aux = None
    if d["aux_prime"] is not None:
        fac = Ideal.principal(_fe_load(F, d["aux_prime"])).factor()
        aux = next(iter(fac))
    return ClassSet(classes, Fraction(d["mass"]), ((), (aux,) if aux else ()), aux)


class Cache:
    """Versioned JSON files under one directory; writes go through a temp file and a rename."""

    def __init__(self, root: str | os.PathLike | None, key: str):
        self.root = Path(root) if root else None
        self.key = key
        if self.root:
            self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, name: str) -> Path:
        return self.root / f"{self.key}-{name}.json"

    def load(self, name: str):
        if not self.root:
            return None
        p = self._path(name)
        if not p.exists():
            return None
        try:
            doc = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError):
            log.warning("ignoring unreadable cache file %s", p)
            return None
        if doc.get("schema") != SCHEMA or doc.get("key") != self.key or doc.get("name") != name:
            log.warning("ignoring stale cache file %s", p)
            return None
        return doc["data"]

    def save(self, name: str, data) -> None:
        if not self.root:
            return
        doc = {"schema": SCHEMA, "key": self.key, "name": name, "version": __version__, "data": data}
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(dumps(doc))
            os.replace(tmp, self._path(name))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def get_classes(job: Job, cache: Cache) -> ClassSet:
    d = cache.load("classes")
    if d is not None:
        return classset_from_json(job.O, d)
    t = time.time()
    cs = enumerate_classes(job.O, aux_prime=job.aux_prime, log=log.info)
    log.info("class set: %d classes in %.1fs", len(cs), time.time() - t)
    cache.save("classes", classset_to_json(cs))
    return cs


def neighbor_store(cs: ClassSet, cache: Cache) -> NeighborStore:
    def name(key):
        a, label, i = key
        return f"nbr-{label}-T{i}-{a}"

    def load(key):
        d = cache.load(name(key))
        return None if d is None else NeighborData.from_json(d)

    def save(key, nd):
        cache.save(name(key), nd.to_json())

    return NeighborStore(cs, load, save, log=log.info)


# ---------------------------------------------------------------- output

def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _matrix_json(A) -> list[list[str]]:
    return [[_s(v) for v in row] for row in np.asarray(A)]


def _eig_json(E: Eigensystem, labels) -> dict:
    out = {"dim": _s(E.dim), "cuspidal": E.cuspidal}
    if E.values:
        d = "1" if E.disc is None else _s(E.disc)
        out["field"] = "Q" if E.disc is None else f"Q(w{E.disc})"
        out["values"] = {l: [_s(E.values[l][0]), _s(E.values[l][1]), d] for l in labels}
    else:
        out["field"] = "degree>2"
        out["charpoly_factor"] = [_s(c) for c in E.factor]
        out["operator"] = E.factor_operator
    return out


def _poly_str(coeffs) -> str:
    n = len(coeffs) - 1
    terms = []
    for k, c in enumerate(coeffs):
        e = n - k
        if c == 0:
            continue
        mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
        mag = str(abs(c)) if abs(c) != 1 or e == 0 else ""
        terms.append(("-" if c < 0 else "+") + mag + mono)
    s = "".join(terms)
    return s[1:] if s.startswith("+") else s


def _table(header: list[str], rows: list[list[str]]) -> str:
    w = [max(len(str(r[k])) for r in [header] + rows) for k in range(len(header))]
    line = lambda r: "  ".join(str(c).rjust(w[k]) for k, c in enumerate(r)).rstrip()
    return "\n".join([line(header), "  ".join("-" * x for x in w)] + [line(r) for r in rows]) + "\n"


# ---------------------------------------------------------------- commands

@dataclass
class Context:
    job: Job
    cache: Cache
    out: list = field(default_factory=list)

    @property
    def cfg(self) -> JobConfig:
        return self.job.cfg

    def emit(self, obj, text: str) -> None:
        self.out.append(dumps(obj) if self.cfg.format == "json" else text)


def cmd_classes(ctx: Context) -> int:
    cs = get_classes(ctx.job, ctx.cache)
    rows, objs = [], []
    for k, L in enumerate(cs.classes):
        g = L.gamma
        objs.append({"index": _s(k), "s": g.s.to_json(), "t": g.t.to_json(), "r": [c.to_json() for c in g.r.c],
                     "stabilizer_order": _s(L.stabilizer_order)})
        rows.append([str(k), str(g.s), "(" + ", ".join(str(c) for c in g.r.c) + ")", str(g.t), str(L.stabilizer_order)])
    obj = {"d": _s(ctx.cfg.d), "classes": objs, "mass": str(cs.mass)}
    ctx.emit(obj, _table(["class", "s", "r", "t", "|Gamma|"], rows) + f"mass = {cs.mass}\n")
    return EXIT_OK


def cmd_mass(ctx: Context) -> int:
    cs = get_classes(ctx.job, ctx.cache)
    formula = mass(ctx.job.F)
    total = sum(Fraction(1, n) for n in cs.stabilizer_orders)
    ok = formula == total
    ctx.emit({"formula": str(formula), "sum_over_classes": str(total), "match": ok},
             f"mass formula   {formula}\nsum 1/|Gamma|  {total}\nmatch          {ok}\n")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_flags(ctx: Context) -> int:
    job = ctx.job
    primes = [job.level] if job.level else [P for P in primes_up_to_norm(job.F, ctx.cfg.max_norm) if P.norm_int % 2]
    rows, objs, ok = [], [], True
    for P in primes:
        for v in VARIANTS:
            n = len(FlagSpace(P, v))
            f = flag_count_formula(P.norm_int, v)
            bf = brute_force_count(FlagSpace(P, v).ring, v) if P.norm_int <= 9 else None
            ok &= n == f and (bf is None or bf == n)
            objs.append({"prime": P.label(), "norm": _s(P.norm_int), "variant": v, "count": _s(n), "formula": _s(f),
                         "brute_force": None if bf is None else _s(bf)})
            rows.append([P.label(), str(P.norm_int), v, str(n), str(f), "-" if bf is None else str(bf)])
    ctx.emit({"flags": objs, "match": ok}, _table(["prime", "N", "variant", "count", "formula", "brute"], rows))
    return EXIT_OK if ok else EXIT_MISMATCH


def _module_and_matrices(ctx: Context, primes=None, check_degrees: bool = True):
    job = ctx.job
    cs = get_classes(job, ctx.cache)
    M = build_module(cs, job.level, ctx.cfg.parahoric)
    store = neighbor_store(cs, ctx.cache)
    if primes is None:
        primes = primes_up_to_norm(job.F, ctx.cfg.max_norm)
    Bs = []
    for P in primes:
        for i in (1, 2):
            t = time.time()
            Bs.append(brandt_matrix(M, i, P, store))
            log.info("%s in %.1fs", Bs[-1].label, time.time() - t)
    return cs, M, Bs


def cmd_brandt(ctx: Context) -> int:
    _, M, Bs = _module_and_matrices(ctx)
    objs, text = [], [f"level {ctx.job.level_label} ({ctx.cfg.parahoric}), dim M = {M.dim}\n"]
    for B in Bs:
        objs.append({"operator": B.label, "at_level": B.at_level, "matrix": _matrix_json(B.matrix)})
        text.append(f"\n{B.label}{' (level prime)' if B.at_level else ''}\n")
        text.append("\n".join("  ".join(f"{v:>6}" for v in row) for row in B.matrix) + "\n")
    ctx.emit({"level": ctx.job.level_label, "parahoric": ctx.cfg.parahoric, "dim": _s(M.dim), "brandt": objs},
             "".join(text))
    return EXIT_OK


def _systems(ctx: Context, primes=None):
    cs, M, Bs = _module_and_matrices(ctx, primes)
    _, Q = eisenstein_and_cusp(M, Bs)
    labels = [B.label for B in Bs]
    return M, Bs, labels, eigensystems(Q, labels)


def cmd_eigensystems(ctx: Context) -> int:
    M, Bs, labels, Es = _systems(ctx)
    head = f"level {ctx.job.level_label} ({ctx.cfg.parahoric}): dim M = {M.dim}, dim S = {M.dim - 1}\n"
    rows, other = [], []
    for k, E in enumerate(Es):
        if E.values:
            tag = "Q" if E.disc is None else f"w{E.disc}"
            rows.append([f"f{k + 1}", str(E.dim), tag] + [E.format_value(l) for l in labels])
        else:
            other.append(f"f{k + 1}: dim {E.dim}, char poly of {E.factor_operator}: {_poly_str(E.factor)}")
    text = head + _table(["", "dim", "field"] + labels, rows) + "".join(s + "\n" for s in other)
    ctx.emit({"level": ctx.job.level_label, "parahoric": ctx.cfg.parahoric, "dim_M": _s(M.dim),
              "dim_S": _s(M.dim - 1), "operators": labels, "systems": [_eig_json(E, labels) for E in Es]}, text)
    return EXIT_OK


def cmd_verify_paper(ctx: Context) -> int:
    """Regression against the reference Q(sqrt 2) data; levels up to max_norm."""
    from .tables import LEVELS, OPERATORS, PRIMES, reference_systems

    job = ctx.job
    if ctx.cfg.d != 2 or ctx.cfg.parahoric != "siegel":
        raise ConfigError("verify-paper needs d = 2 and the Siegel parahoric")
    checks = []

    def check(name, ok, detail=""):
        checks.append({"check": name, "ok": bool(ok), "detail": detail})
        log.info("%s: %s %s", name, "ok" if ok else "MISMATCH", detail)

    cs = get_classes(job, ctx.cache)
    check("classes", sorted(cs.stabilizer_orders) == [3840, 4608] and cs.mass == Fraction(11, 23040),
          f"orders {sorted(cs.stabilizer_orders)}, mass {cs.mass}")
    byl = {P.label(): P for P in primes_up_to_norm(job.F, 31)}
    primes = [byl[l] for l in PRIMES]
    expected = {
        "2+sqrt2": ([[9, 6], [5, 10]], [[12, 18], [15, 15]]),
        "3+sqrt2": ([[208, 192], [160, 240]], [[1264, 1536], [1280, 1520]]),
        "3-sqrt2": ([[208, 192], [160, 240]], [[1264, 1536], [1280, 1520]]),
        "3": ([[436, 384], [320, 500]], [[3540, 3840], [3200, 4180]]),
    }
    for lab, (norm, dM, dS, _) in LEVELS.items():
        if norm > ctx.cfg.max_norm:
            continue
        sub = copy.copy(job)
        sub.level = None if lab == "1" else byl[lab]
        M, Bs, labels, Es = _systems(Context(sub, ctx.cache), primes)
        if tuple(labels) != OPERATORS:
            raise AssertionError(f"operator labels {labels}")
        check(f"level {lab}: dim M/S", (M.dim, M.dim - 1) == (dM, dS), f"{M.dim}/{M.dim - 1}")
        check(f"level {lab}: row sums", all(_rows_ok(B, byl[B.prime].norm_int) for B in Bs))
        if lab == "1":
            perm_ok = any(all((B.matrix[np.ix_(p, p)] == expected[B.prime][B.i - 1]).all() for B in Bs)
                          for p in ([0, 1], [1, 0]))
            check("level 1: Brandt matrices", perm_ok)
        missing = [vals for D, vals in reference_systems(lab)
                   if not any(E.disc == D and vals in (E.values, E.conjugate().values) for E in Es)]
        n_ref = len(reference_systems(lab))
        check(f"level {lab}: eigensystems", not missing, f"{n_ref - len(missing)}/{n_ref} reference rows found")
        if lab == "1":
            cusp = [E for E in Es if E.values]
            a = sk_detect(cusp[0], [(P.label(), P.norm_int) for P in primes]) if len(cusp) == 1 else None
            check("level 1: Saito-Kurokawa", a == [-2, -8, -8, 26], f"a = {a}")
    ok = all(c["ok"] for c in checks)
    text = "".join(f"{'ok ' if c['ok'] else 'FAIL'} {c['check']} {c['detail']}\n" for c in checks)
    ctx.emit({"checks": checks, "ok": ok}, text)
    return EXIT_OK if ok else EXIT_MISMATCH


def _rows_ok(B: BrandtMatrix, N: int) -> bool:
    """Row sums equal the degree; at the level prime T_1 has degree N^3 and T_2 vanishes."""
    if B.at_level:
        want = N ** 3 if B.i == 1 else 0
    else:
        want = degree(N, B.i)
    return bool((B.matrix.sum(axis=1) == want).all())


HANDLERS = {"classes": cmd_classes, "mass": cmd_mass, "flags": cmd_flags, "brandt": cmd_brandt,
            "eigensystems": cmd_eigensystems, "verify-paper": cmd_verify_paper}


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hsiegel", description="Algebraic modular forms on GU_2(D) over real quadratic fields.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="flat key = value config file")
    p.add_argument("--d", type=int, help="F = Q(sqrt d)")
    p.add_argument("--level", help="generator of the level, an expression in integers and w")
    p.add_argument("--parahoric", choices=VARIANTS)
    p.add_argument("--max-norm", type=int, dest="max_norm", help="largest prime norm")
    p.add_argument("--format", choices=("json", "table"))
    p.add_argument("--cache", help="cache directory (default: $HSIEGEL_CACHE)")
    p.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    return p


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config)
        for k in ("d", "level", "parahoric", "max_norm", "format"):
            v = getattr(args, k)
            if v is not None:
                setattr(cfg, k, v)
        cfg.cache = args.cache or os.environ.get("HSIEGEL_CACHE") or None
        job = cfg.resolve()
        ctx = Context(job, Cache(cfg.cache, job.cache_key()))
        status = HANDLERS[args.command](ctx)
    except ConfigError as e:
        print(f"hsiegel: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    stdout.write("".join(ctx.out))
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
