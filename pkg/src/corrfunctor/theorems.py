"""Verifiers for the isomorphisms between correspondence functors.

Each verifier builds the maps explicitly, checks them exactly at truncation
and returns a ``VerificationReport``.  Verifiers never raise on a failed
check; the failure and a replayable witness go into the report.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_SEED, SweepConfig, exhaustive_count, sweep
from .functors.core import (FunctorRep, Morphism, associator, constant, functor_FT, morphism_vector, representable, shift, swap_morphism, tensor, unit_morphism)
from .functors.hom import (hom_is_exact, hom_solver, internal_hom, morphism_from_pairing, pairing_from_morphism,
                           pairing_solver, random_morphism, random_pairing)
from .functors.modules import Induction, L_functor, RModule, induced_module, tensor_modules
from .kernel import Echelon, Matrix, Vec, kron, rank
from .lattices import Lattice, powerset, product
from .relations import Correspondence, concat, identity, inject_left, inject_right, swap


@dataclass
class VerificationReport:
    theorem_id: str
    parameters: str
    checked_cases: int = 0
    status: str = "PASS"
    witness: str | None = None
    details: dict = field(default_factory=dict)

    def fail(self, witness: str) -> "VerificationReport":
        self.status = "FAIL"
        self.witness = witness
        return self

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_line(self) -> str:
        line = f"THEOREM {self.theorem_id} {self.status} cases={self.checked_cases}"
        if self.witness is not None:
            line += f" witness={self.witness}"
        return line

    def to_json(self) -> str:
        return json.dumps({"theorem": self.theorem_id, "parameters": self.parameters, "status": self.status,
                           "cases": self.checked_cases, "witness": self.witness, "details": self.details},
                          sort_keys=True, default=str)


def merge_reports(theorem_id: str, parameters: str, parts: Sequence[VerificationReport]) -> VerificationReport:
    out = VerificationReport(theorem_id, parameters)
    for p in parts:
        out.checked_cases += p.checked_cases
        out.details[p.theorem_id] = p.status
        if not p.passed and out.passed:
            out.fail(f"{p.theorem_id}: {p.witness}")
    return out


def _naturality(report: VerificationReport, psi: Morphism, cases: Iterable[Correspondence], label: str) -> bool:
    for u in cases:
        report.checked_cases += 1
        if psi.naturality_failure(u):
            report.fail(f"{label} not natural for {u.short()}")
            return False
    return True


def _split_sweep(bound: int, cfg: SweepConfig):
    small = min(bound, cfg.exhaustive_max)
    cases = list(sweep(bound, cfg))
    n_exh = exhaustive_count(small)
    return cases, n_exh


# --- tensor of lattice functors ---------------------------------------------------------

def tau_morphism(t: Lattice, tp: Lattice, bound: int) -> Morphism:
    """τ: F_T ⊗ F_T' -> F_{T x T'}, φ ⊗ φ' -> (x -> (φ(x), φ'(x)))."""
    src = tensor(functor_FT(t, bound), functor_FT(tp, bound))
    tgt = functor_FT(product(t, tp), bound)
    comps = []
    for n in range(bound + 1):
        a = np.arange(t.size ** n, dtype=np.int64)
        b = np.arange(tp.size ** n, dtype=np.int64)
        # digits of a and b, first coordinate most significant
        out = np.zeros((a.size, b.size), dtype=np.int64)
        for pos in range(n):
            p = n - 1 - pos
            da = (a // t.size ** p) % t.size
            db = (b // tp.size ** p) % tp.size
            out += (da[:, None] * tp.size + db[None, :]) * (t.size * tp.size) ** p
        comps.append(Matrix.from_map(tgt.dims[n], out.reshape(-1)))
    return Morphism(src, tgt, comps)


def _is_permutation(m: Matrix) -> bool:
    img = m.img
    return (m.nrows == m.ncols and img is not None and (img >= 0).all()
            and np.unique(img).size == m.ncols)


def verify_tau(t: Lattice, tp: Lattice, bound: int, cfg: SweepConfig = SweepConfig()) -> VerificationReport:
    rep = VerificationReport("tau", f"T={t.name or t.size} T'={tp.name or tp.size} N={bound}")
    tau = tau_morphism(t, tp, bound)
    for n, c in enumerate(tau.components):
        if not _is_permutation(c):
            return rep.fail(f"tau_{n} is not a bijection of bases")
    cases, n_exh = _split_sweep(bound, cfg)
    rep.details.update(exhaustive_cases=n_exh, random_cases=len(cases) - n_exh,
                       dims=list(tau.source.dims), target_dims=list(tau.target.dims))
    _naturality(rep, tau, cases, "tau")
    return rep


def representable_tensor_morphism(e: int, ep: int, bound: int) -> Morphism:
    """kC(-,E) ⊗ kC(-,E') -> kC(-,E ⊔ E'), P ⊗ Q -> (P, Q)."""
    src = tensor(representable(e, bound), representable(ep, bound))
    tgt = representable(e + ep, bound)
    comps = []
    for n in range(bound + 1):
        img = []
        for p in range(1 << (n * e)):
            pc = Correspondence.from_pattern(n, e, p)
            for q in range(1 << (n * ep)):
                img.append(concat(pc, Correspondence.from_pattern(n, ep, q)).pattern)
        comps.append(Matrix.from_map(tgt.dims[n], img))
    return Morphism(src, tgt, comps)


def verify_representable_tensor(e: int, ep: int, bound: int, cfg: SweepConfig = SweepConfig()) -> VerificationReport:
    params = f"E={e} E'={ep} N={bound}"
    rep = VerificationReport("representable-tensor", params)
    if e + ep > 3:
        return rep.fail("|E|+|E'| exceeds 3")
    for n in range(bound + 1):
        rep.checked_cases += 1
        if (1 << (n * e)) * (1 << (n * ep)) != 1 << (n * (e + ep)):
            return rep.fail(f"dimension identity at n={n}")
    cases, _ = _split_sweep(bound, cfg)
    # kC(-,E) and F_{P(E)} share their basis
    for k in (e, ep):
        r, f = representable(k, bound), functor_FT(powerset(k), bound)
        for u in cases:
            rep.checked_cases += 1
            if r.action(u) != f.action(u):
                return rep.fail(f"kC(-,{k}) differs from F_P({k}) on {u.short()}")
    sub = verify_tau(powerset(e), powerset(ep), bound, cfg)
    rep.checked_cases += sub.checked_cases
    if not sub.passed:
        return rep.fail(f"tau: {sub.witness}")
    iso = representable_tensor_morphism(e, ep, bound)
    for n, c in enumerate(iso.components):
        if not _is_permutation(c):
            return rep.fail(f"(P,Q) identification at n={n} is not a bijection")
    _naturality(rep, iso, cases, "(P,Q)")
    return rep


# --- tensor structure and pairings ---------------------------------------------------

def verify_tensor_laws(m: FunctorRep, mp: FunctorRep, mpp: FunctorRep,
                       cfg: SweepConfig = SweepConfig(exhaustive_max=2, samples=0)) -> VerificationReport:
    rep = VerificationReport("tensor-laws", f"{m.name},{mp.name},{mpp.name} N={m.bound}")
    cases = list(sweep(m.bound, cfg))
    for label, psi in (("unit", unit_morphism(m)), ("swap", swap_morphism(m, mp)),
                       ("associator", associator(m, mp, mpp))):
        if not psi.is_invertible():
            return rep.fail(f"{label} not invertible")
        if not _naturality(rep, psi, cases, label):
            return rep
    return rep


def pairing_bijection_rank(basis: Sequence[Morphism]) -> int:
    """Rank of ψ -> ψ̂ on a basis of Hom(M' ⊗ M, M'')."""
    e = Echelon()
    for psi in basis:
        hat = pairing_from_morphism(psi)
        vec: Vec = {}
        off = 0
        for k in sorted(hat.components):
            c = hat.components[k]
            for j in range(c.ncols):
                for i, v in c.col(j).items():
                    vec[off + i * c.ncols + j] = v
            off += c.nrows * c.ncols
        e.add(vec)
    return e.rank


def verify_pairing_roundtrip(functors: Sequence[FunctorRep], samples: int = 20,
                             seed: int = DEFAULT_SEED) -> VerificationReport:
    """Both round trips of the morphism/pairing correspondence on random data.

    Each sample draws a triple (M', M, M'') from ``functors``, a random
    morphism M' ⊗ M -> M'' and a random pairing M' x M -> M''.
    """
    bound = functors[0].bound
    rep = VerificationReport("pairing", f"{len(functors)} functors N={bound} samples={samples}")
    rng = random.Random(seed)
    avail = bound // 2
    solved: dict = {}
    for s in range(samples):
        a, b, c = (rng.randrange(len(functors)) for _ in range(3))
        mp, m, mpp = functors[a], functors[b], functors[c]
        if (a, b, c) not in solved:
            homs = hom_solver(tensor(mp, m), mpp)
            pairs = pairing_solver(mp, m, mpp)
            if len(homs) != len(pairs) or pairing_bijection_rank(homs) != len(pairs):
                return rep.fail(f"sample {s}: Hom has dim {len(homs)}, pairings {len(pairs)}")
            solved[(a, b, c)] = (homs, pairs)
        homs, pairs = solved[(a, b, c)]
        tag = f"sample {s} ({mp.name},{m.name},{mpp.name})"
        psi = random_morphism(homs, rng, tensor(mp, m), mpp)
        hat = pairing_from_morphism(psi)
        rep.checked_cases += 1
        if morphism_from_pairing(hat) != psi.truncate(avail):
            return rep.fail(f"{tag}: (psi^)~ != psi")
        if hat.truncate(min(bound, 2)).first_unbinatural() is not None:
            return rep.fail(f"{tag}: psi^ not binatural")
        if pairs:
            eta = random_pairing(pairs, rng)
            rep.checked_cases += 1
            if pairing_from_morphism(morphism_from_pairing(eta)) != eta.truncate(avail):
                return rep.fail(f"{tag}: (eta~)^ != eta")
    rep.details["available_bound"] = avail
    return rep


# --- tensor of the functors L_{E,V} ---------------------------------------------------

class _LEVData:
    def __init__(self, e: int, v: RModule, f: int, w: RModule, bound: int):
        self.e, self.f, self.g = e, f, e + f
        self.v, self.w = v, w
        self.left = L_functor(e, v, bound)
        self.right = L_functor(f, w, bound)
        self.tens = tensor(self.left, self.right)
        self.v_up = induced_module(v, self.g)
        self.w_up = induced_module(w, self.g)
        self.z = tensor_modules(self.v_up, self.w_up)
        self.big = L_functor(self.g, self.z, bound)


def _project(ind: Induction, amb: Vec) -> Vec:
    return ind.projection.apply(amb)


def _phi_ambient(d: _LEVData, n: int) -> Matrix:
    """Φ_X on every ambient basis vector C ⊗ z of L_G(X), z a basis vector of Z."""
    big = d.big.inductions[n]
    li, ri = d.left.inductions[n], d.right.inductions[n]
    vi, wi = d.v_up.induction, d.w_up.induction
    dw_up = d.w_up.dim
    reps_v = [vi.representative(i) for i in range(vi.dim)]
    reps_w = [wi.representative(i) for i in range(wi.dim)]
    cols = []
    rdim = ri.dim
    for p in range(big.n_corr):
        c = Correspondence.from_pattern(n, d.g, p)
        for zj in range(d.z.dim):
            a, vj = reps_v[zj // dw_up]
            b, wj = reps_w[zj % dw_up]
            lv = _project(li, li.ambient_vector(c @ a, {vj: 1}))
            rv = _project(ri, ri.ambient_vector(c @ b, {wj: 1}))
            col: Vec = {}
            for i, x in lv.items():
                for j, y in rv.items():
                    col[i * rdim + j] = x * y
            cols.append(col)
    return Matrix(li.dim * ri.dim, big.ambient_dim, cols=cols)


def _psi_ambient(d: _LEVData, n: int) -> Matrix:
    """Ψ_X on every pair of ambient basis vectors (P ⊗ v) ⊗ (Q ⊗ w)."""
    big = d.big.inductions[n]
    li, ri = d.left.inductions[n], d.right.inductions[n]
    vi, wi = d.v_up.induction, d.w_up.induction
    il = inject_left(d.e, d.f)
    ir = inject_right(d.e, d.f)
    v_elems = [_project(vi, vi.ambient_vector(il, {j: 1})) for j in range(d.v.dim)]
    w_elems = [_project(wi, wi.ambient_vector(ir, {j: 1})) for j in range(d.w.dim)]
    dw_up = d.w_up.dim
    cols = []
    for pl in range(li.n_corr):
        pc = Correspondence.from_pattern(n, d.e, pl)
        for vj in range(d.v.dim):
            for pr in range(ri.n_corr):
                qc = Correspondence.from_pattern(n, d.f, pr)
                base = concat(pc, qc).pattern * d.z.dim
                for wj in range(d.w.dim):
                    amb: Vec = {}
                    for i, x in v_elems[vj].items():
                        for j, y in w_elems[wj].items():
                            amb[base + i * dw_up + j] = x * y
                    cols.append(_project(big, amb))
    # ambient of the tensor is amb_L ⊗ amb_R with index (P,v) major
    return Matrix(big.dim, li.ambient_dim * ri.ambient_dim, cols=cols)


def lev_morphisms(e: int, v: RModule, f: int, w: RModule, bound: int):
    """Φ: L_{G,Z} -> L_{E,V} ⊗ L_{F,W} and Ψ in the other direction, on the quotient bases.

    Also returns the ambient-level well-definedness defects (zero when well defined).
    """
    d = _LEVData(e, v, f, w, bound)
    phis, psis, defects = [], [], []
    for n in range(bound + 1):
        big = d.big.inductions[n]
        li, ri = d.left.inductions[n], d.right.inductions[n]
        pa = _phi_ambient(d, n)
        qa = _psi_ambient(d, n)
        phi = pa @ big.section
        sec = kron(li.section, ri.section)
        proj = kron(li.projection, ri.projection)
        psi = qa @ sec
        defect_phi = not (pa == phi @ big.projection)
        defect_psi = not (qa == psi @ proj)
        phis.append(phi)
        psis.append(psi)
        defects.append((defect_phi, defect_psi))
    return d, Morphism(d.big, d.tens, phis), Morphism(d.tens, d.big, psis), defects


def verify_LEV_tensor(e: int, v: RModule, f: int, w: RModule, bound: int,
                      cfg: SweepConfig = SweepConfig()) -> VerificationReport:
    rep = VerificationReport("lev-tensor", f"E={e} V={v.name} F={f} W={w.name} N={bound}")
    if e + f > 2:
        return rep.fail("|E|+|F| exceeds 2")
    d, phi, psi, defects = lev_morphisms(e, v, f, w, bound)
    rep.details.update(left_dims=list(d.tens.dims), right_dims=list(d.big.dims))
    for n in range(bound + 1):
        rep.checked_cases += 1
        if d.tens.dims[n] != d.big.dims[n]:
            return rep.fail(f"dims differ at n={n}: {d.tens.dims[n]} vs {d.big.dims[n]}")
        if defects[n][0]:
            return rep.fail(f"Phi_{n} does not kill the relators")
        if defects[n][1]:
            return rep.fail(f"Psi_{n} does not kill the relators")
        if not (phi[n] @ psi[n]).is_identity():
            return rep.fail(f"Phi_{n} Psi_{n} != id")
        if not (psi[n] @ phi[n]).is_identity():
            return rep.fail(f"Psi_{n} Phi_{n} != id")
    cases = list(sweep(bound, cfg))
    if _naturality(rep, phi, cases, "Phi"):
        _naturality(rep, psi, cases, "Psi")
    return rep


# --- internal hom ---------------------------------------------------------------------

def hom_dims(m: FunctorRep, mp: FunctorRep) -> tuple[int, bool]:
    return len(hom_solver(m, mp)), hom_is_exact(m)


def adjunction_transpose(psi: Morphism, h) -> Morphism:
    """ψ -> ψ̄: M -> H(M', M''), ψ̄_Y(m)_X(m') = ψ̂_{X,Y}(m' ⊗ m)."""
    mp, m = psi.source.factors
    hat = pairing_from_morphism(psi)
    level, out = h.level, h.bound
    msrc = m.truncate(out)
    comps = []
    for y in range(out + 1):
        cols = []
        for j in range(m.dims[y]):
            vec: Vec = {}
            off = 0
            for x in range(level + 1):
                c = hat.components[(x, y)]
                dmp = mp.dims[x]
                # block ψ̄_Y(e_j)_X has rows M''(X⊔Y), columns M'(X)
                for a in range(dmp):
                    for i, val in c.col(a * m.dims[y] + j).items():
                        vec[off + i * dmp + a] = val
                off += c.nrows * dmp
            coords = h.coords[y].coords(vec)
            if coords is None:
                raise ArithmeticError(f"transpose at Y={y} is not a morphism M' -> M''_Y")
            cols.append(coords)
        comps.append(Matrix(h.dims[y], m.dims[y], cols=cols))
    return Morphism(msrc, h, comps)


def verify_adjunction_dims(m: FunctorRep, mp: FunctorRep, mpp: FunctorRep,
                           cfg: SweepConfig = SweepConfig()) -> VerificationReport:
    """dim Hom(M' ⊗ M, M'') = dim Hom(M, H(M', M'')), plus the transposes of a basis."""
    rep = VerificationReport("adjunction", f"M={m.name} M'={mp.name} M''={mpp.name} N={m.bound}")
    left = hom_solver(tensor(mp, m), mpp)
    h = internal_hom(mp, mpp)
    right = hom_solver(m.truncate(h.bound), h)
    rep.details.update(left_dim=len(left), right_dim=len(right), hom_bound=h.bound, level=h.level)
    rep.checked_cases += 1
    if len(left) != len(right):
        return rep.fail(f"dim Hom(M'⊗M,M'')={len(left)} but dim Hom(M,H)={len(right)}")
    cases = list(sweep(h.bound, cfg))
    e = Echelon()
    for i, psi in enumerate(left):
        try:
            bar = adjunction_transpose(psi, h)
        except ArithmeticError as exc:
            return rep.fail(f"basis element {i}: {exc}")
        if not _naturality(rep, bar, cases, f"transpose of basis element {i}"):
            return rep
        if e.add(morphism_vector(bar)) is not None:
            return rep.fail(f"transpose of basis element {i} is dependent on earlier ones")
    return rep


def yoneda_identification(h, n_rep: FunctorRep, e: int) -> Morphism:
    """H(kC(-,E), N) -> N_E: ψ -> ψ_E(Δ_E), then N(E⊔F) -> N(F⊔E) by the swap."""
    target = shift(n_rep, e).truncate(h.bound)
    delta = identity(e).pattern
    comps = []
    for f in range(h.bound + 1):
        sw = n_rep.action(swap(e, f))
        cols = [sw.apply(psi.components[e].col(delta)) for psi in h.homs[f]]
        comps.append(Matrix(target.dims[f], h.dims[f], cols=cols))
    return Morphism(h, target, comps)


def constant_identification(h, n_rep: FunctorRep) -> Morphism:
    """H(k, N) -> N: ψ -> ψ_∅(1) in N_F(∅) = N(F)."""
    target = n_rep.truncate(h.bound)
    comps = []
    for f in range(h.bound + 1):
        cols = [psi.components[0].col(0) for psi in h.homs[f]]
        comps.append(Matrix(target.dims[f], h.dims[f], cols=cols))
    return Morphism(h, target, comps)


def _check_iso(rep: VerificationReport, iso: Morphism, cases, label: str) -> bool:
    for n, c in enumerate(iso.components):
        rep.checked_cases += 1
        if c.nrows != c.ncols or rank(c) != c.nrows:
            rep.fail(f"{label} at size {n}: {c.ncols} -> {c.nrows} not invertible")
            return False
    return _naturality(rep, iso, cases, label)


def verify_internal_hom_identities(n_rep: FunctorRep, e: int, m: FunctorRep | None = None,
                                   cfg: SweepConfig = SweepConfig()) -> VerificationReport:
    """H(kC(-,E), N) ≅ N_E, H(k, N) ≅ N and H(M, k) ≅ k^{dim M(∅)} with trivial action."""
    bound = n_rep.bound
    m = m or n_rep
    parts = []

    r1 = VerificationReport("hom-representable", f"N={n_rep.name} E={e} bound={bound}")
    h = internal_hom(representable(e, bound), n_rep)
    if h.level < e:
        r1.fail(f"level {h.level} below |E|={e}")
    else:
        cases = list(sweep(h.bound, cfg))
        _check_iso(r1, yoneda_identification(h, n_rep, e), cases, "Yoneda map")
    parts.append(r1)

    r2 = VerificationReport("hom-constant", f"N={n_rep.name} bound={bound}")
    h = internal_hom(constant(bound), n_rep)
    _check_iso(r2, constant_identification(h, n_rep), list(sweep(h.bound, cfg)), "evaluation at 1")
    parts.append(r2)

    r3 = VerificationReport("hom-into-constant", f"M={m.name} bound={bound}")
    h = internal_hom(m, constant(bound))
    for n in range(h.bound + 1):
        r3.checked_cases += 1
        if h.dims[n] != m.dims[0]:
            r3.fail(f"dim at size {n} is {h.dims[n]}, expected {m.dims[0]}")
            break
    if r3.passed:
        for u in sweep(h.bound, cfg):
            r3.checked_cases += 1
            if h.action(u) != Matrix.identity(m.dims[0]):
                r3.fail(f"{u.short()} does not act as the identity")
                break
    parts.append(r3)
    return merge_reports("internal-hom", f"N={n_rep.name} E={e} M={m.name} bound={bound}", parts)


__all__ = [
    "VerificationReport", "merge_reports", "tau_morphism", "verify_tau", "representable_tensor_morphism",
    "verify_representable_tensor", "verify_tensor_laws", "verify_pairing_roundtrip", "lev_morphisms",
    "verify_LEV_tensor", "adjunction_transpose", "verify_adjunction_dims", "yoneda_identification",
    "constant_identification", "verify_internal_hom_identities", "hom_dims", "pairing_bijection_rank",
]
