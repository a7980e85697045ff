//! Pipeline stages. Each consumes deserialized inputs and returns a
//! serializable artifact or certificate.

use std::collections::BTreeMap;

use congruence_kit_core::congruence::{
    jr_compose, verify_congruence, verify_mod2, verify_theorem1, CoeffDescriptor, CompareOptions, CongruenceReport,
    EigenvalueTable, ParamodularTable, ReportRow, Theorem1Inputs,
};
use congruence_kit_core::exactlin::{intersect_modp, kernel_int, IntSubspace};
use congruence_kit_core::genus::{
    calibrate_affine, eigen_scalar_on, enumerate_genus, hecke_matrix, hecke_rows, scalar_from_pivot_rows, GenusData, HeckeOp, ParMap,
};
use congruence_kit_core::quinlat::{builtin_q79, QuadForm};
use congruence_kit_core::rqfield::{factor_principal, primes_for_sturm, PrimeIdealF, ResidueField, ResidueMap, SplitKind};
use congruence_kit_core::sturm::{
    hj_cusp_cycle, projective_line_size, sturm_bound, surface_invariants, weight_plan, SturmError, Weight, DEFAULT_PLAN_LIMIT,
};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{KitError, Result};
use crate::formats::{BoundEntry, GenusFile, HeckeFile, KernelDims, PrimesFile, SturmFile};
use crate::mirror::Fetched;

/// Norm of the level `𝔫 = (1 + 4√5)`.
pub const LEVEL_NORM: u64 = 79;

/// Auxiliary level `(3)` of the Hilbert modular surface.
pub const AUX_LEVEL: u64 = 3;

pub fn genus<P: ParMap>(seed: &QuadForm, p: u64, par: &P) -> Result<GenusFile> {
    let g = enumerate_genus(seed, p, par).map_err(|e| KitError::internal("genus", e))?;
    Ok(GenusFile::from_genus(seed, &g))
}

/// `ker(T₂ + 5)`, `ker T₂` and the dimension of their intersection mod 5.
pub fn t2_subspaces(t2: &HeckeOp) -> Result<(IntSubspace, IntSubspace, usize)> {
    let lin = |e| KitError::internal("hecke", e);
    let v1 = kernel_int(&t2.matrix.add_scalar(&BigInt::from(5)).map_err(lin)?).map_err(lin)?;
    let v2 = kernel_int(&t2.matrix).map_err(lin)?;
    let meet = intersect_modp(&v1, &v2, 5).map_err(lin)?.len();
    Ok((v1, v2, meet))
}

fn small(x: BigInt, stage: &'static str) -> Result<i64> {
    x.to_i64().ok_or_else(|| KitError::internal(stage, "scalar exceeds 64 bits"))
}

pub fn hecke<P: ParMap>(g: &GenusData, p: u64, degree: u8, par: &P) -> Result<HeckeFile> {
    let op = hecke_matrix(g, p, degree, par).map_err(|e| KitError::Usage(e.to_string()))?;
    let rows = (0..op.matrix.rows())
        .map(|i| op.matrix.row(i).iter().map(|(j, c)| (*j, c.to_u64().unwrap_or(u64::MAX))).collect())
        .collect();
    let (dims, scalar_v1) = if p == 2 && degree == 1 {
        let (v1, v2, meet) = t2_subspaces(&op)?;
        let s = eigen_scalar_on(g, &op, &v1).map_err(|e| KitError::internal("hecke", e))?;
        (Some(KernelDims { v1: v1.dim(), v2: v2.dim(), meet_mod5: meet }), Some(small(s, "hecke")?))
    } else {
        (None, None)
    };
    Ok(HeckeFile { p, degree, size: g.len(), rows, dims, scalar_v1 })
}

fn sturm_err(e: SturmError) -> KitError {
    KitError::internal("sturm", e)
}

/// Surface invariants at full level `(3)`, the weight plans for `ℓ = 5`
/// (ramified) and `ℓ = 2` (inert), and the resulting bounds.
pub fn sturm() -> Result<SturmFile> {
    // the cusp cycle repeats once per power of the unit; its count comes
    // back from the consistency check
    let inv = match surface_invariants(AUX_LEVEL, &hj_cusp_cycle(1).map_err(sturm_err)?) {
        Err(SturmError::CycleLength { want, .. }) => surface_invariants(AUX_LEVEL, &hj_cusp_cycle(want).map_err(sturm_err)?),
        r => r,
    }
    .map_err(sturm_err)?;
    let j = projective_line_size(LEVEL_NORM);
    let f = Weight::new([2, 2], [0, 0]);
    let h = Weight::new([2, 4], [1, 0]);
    let mut bounds = Vec::new();
    for (ell, ramified) in [(5u64, true), (2, false)] {
        let plan = weight_plan(f, h, ell, ramified, DEFAULT_PLAN_LIMIT).map_err(sturm_err)?;
        if !plan.verify() {
            return Err(KitError::internal("sturm", format!("weight plan for l = {ell} does not verify")));
        }
        let weight_half = (plan.final_f.k[0] / 2) as u64;
        let bound = sturm_bound(weight_half, j, &inv).map_err(sturm_err)?;
        bounds.push(BoundEntry {
            ell,
            final_weight: (plan.final_f.k[0], plan.final_f.k[1]),
            weight_half,
            bound,
            trace_bound: bound as i64 + 1,
        });
    }
    Ok(SturmFile {
        aux_level: AUX_LEVEL,
        d: inv.d,
        n_sq: inv.n_sq,
        unit_index: inv.unit_index,
        cusps: inv.num_cusps,
        cycle: inv.cycle.entries(),
        zeta_minus_one: inv.zeta_m1.to_string(),
        kd: inv.kd.to_string(),
        kk: inv.kk.to_string(),
        ratio: inv.ratio().map_err(sturm_err)?.to_string(),
        j,
        bounds,
    })
}

pub fn primes(trace_bound: i64, excluded: &[PrimeIdealF]) -> Result<PrimesFile> {
    let ps = primes_for_sturm(trace_bound, excluded).map_err(|e| KitError::internal("primes", e))?;
    Ok(PrimesFile {
        trace_bound,
        excluded: excluded.iter().map(PrimeIdealF::label).collect(),
        count: ps.len(),
        primes: ps.iter().map(PrimeIdealF::label).collect(),
    })
}

pub fn parse_primes(file: &PrimesFile) -> Result<Vec<PrimeIdealF>> {
    file.primes.iter().map(|s| s.parse().map_err(|e| KitError::internal("primes", e))).collect()
}

/// The residue map named `lambda5` or `q1`, built from the first cubic
/// table; with only rational tables `w` plays no role.
pub fn residue_map(name: &str, tables: &[&EigenvalueTable]) -> Result<ResidueMap> {
    let prime = match name {
        "lambda5" => PrimeIdealF::sqrt5(),
        "q1" => "4:0:2".parse().expect("label"),
        _ => return Err(KitError::Usage(format!("unknown residue map {name:?}; expected lambda5 or q1"))),
    };
    let cubic = tables.iter().find_map(|t| match &t.field {
        CoeffDescriptor::Cubic(cf) => Some(cf),
        CoeffDescriptor::Rational => None,
    });
    let map = match (cubic, name) {
        (Some(cf), "lambda5") => ResidueMap::lambda(cf),
        (Some(cf), _) => ResidueMap::q1(cf),
        (None, _) => {
            let field = ResidueField::of(&prime);
            return Ok(ResidueMap { prime, field, w: field.zero(), scale: 0, root: field.zero(), multiplicity: 0 });
        }
    };
    map.map_err(|e| KitError::internal("residue", e))
}

/// Resolves `sqrt5`, `two`, or a prime label.
pub fn parse_prime(s: &str) -> Result<PrimeIdealF> {
    match s {
        "sqrt5" => Ok(PrimeIdealF::sqrt5()),
        "two" => Ok("4:0:2".parse().expect("label")),
        _ => s.parse().map_err(|_| KitError::Usage(format!("{s:?} is not a prime label"))),
    }
}

pub fn verify(left: &EigenvalueTable, right: &EigenvalueTable, map: &ResidueMap, opts: &CompareOptions) -> Result<CongruenceReport> {
    verify_congruence(left, right, map, opts).map_err(|e| KitError::internal("verify", e))
}

/// The level prime of a table: the Atkin–Lehner prime of norm `level`.
pub fn level_prime(t: &EigenvalueTable) -> Result<PrimeIdealF> {
    t.atkin_lehner
        .keys()
        .find(|p| p.norm == t.level)
        .copied()
        .ok_or_else(|| KitError::internal("tables", format!("{} has no Atkin-Lehner sign at a prime of norm {}", t.form, t.level)))
}

fn integer_entry(t: &EigenvalueTable, p: &PrimeIdealF) -> Result<Option<i64>> {
    let Some(v) = t.get(p) else { return Ok(None) };
    let c = &v.coords()[0];
    if !matches!(t.field, CoeffDescriptor::Rational) || !c.b.is_zero() || !c.a.is_integer() {
        return Err(KitError::internal("curve", format!("{} at {} is not a rational integer", t.form, p.label())));
    }
    Ok(c.a.to_integer().to_i64())
}

/// Compares a rational table with the traces of Frobenius of the curve
/// whose conductor is the table's level prime, exactly. Split primes are
/// compared as unordered pairs unless the table fixes labels.
pub fn curve_check<P: ParMap>(f: &EigenvalueTable, curves: &[Fetched], primes: &[PrimeIdealF], par: &P) -> Result<CongruenceReport> {
    let level = level_prime(f)?;
    let is_level = |c: &Fetched| matches!(factor_principal(&c.curve.conductor), Ok(v) if v == [(level, 1)]);
    let main = curves.iter().find(|c| is_level(c)).ok_or_else(|| KitError::internal("curve", "no curve has the table's level as conductor"))?;
    let good: Vec<PrimeIdealF> = primes.iter().copied().filter(|p| *p != level).collect();
    let aps: Vec<std::result::Result<i64, String>> = par.map_indexed(good.len(), &|i| main.curve.ap(&good[i]).map_err(|e| e.to_string()));
    let aps: Vec<i64> = aps.into_iter().collect::<std::result::Result<_, _>>().map_err(|e| KitError::internal("curve", e))?;
    let mut rep = CongruenceReport::new(&f.form, &main.label, "exact integers".to_string(), vec![level.label()]);
    // per norm (and per prime unless pairs are unordered): labels, table values, traces
    type Group = (Vec<String>, Vec<Option<i64>>, Vec<i64>);
    let mut groups: BTreeMap<(u64, String), Group> = BTreeMap::new();
    for (p, a) in good.iter().zip(&aps) {
        let key = if f.labels_fixed || p.kind != SplitKind::Split { p.label() } else { String::new() };
        let g = groups.entry((p.norm, key)).or_default();
        g.0.push(p.label());
        g.1.push(integer_entry(f, p)?);
        g.2.push(*a);
    }
    for (_, (labels, mut lhs, mut rhs)) in groups {
        lhs.sort();
        rhs.sort();
        let show = |v: &[String]| if v.len() == 1 { v[0].clone() } else { format!("{{{}}}", v.join(", ")) };
        let l: Vec<String> = lhs.iter().map(|x| x.map_or("missing".to_string(), |x| x.to_string())).collect();
        let r: Vec<String> = rhs.iter().map(ToString::to_string).collect();
        let pass = lhs.iter().zip(&rhs).all(|(x, y)| *x == Some(*y));
        rep.rows.push(ReportRow { prime: labels.join(","), lhs: show(&l), rhs: show(&r), pass });
    }
    let hasse_bad = good.iter().zip(&aps).filter(|(p, a)| (*a * *a) as u64 > 4 * p.norm).count();
    rep.check("Hasse bound", hasse_bad == 0, format!("{} primes, {hasse_bad} violations", good.len()));
    let red = main.curve.reduction_ap(&level);
    let at_level = integer_entry(f, &level)?;
    rep.check("level prime", at_level == Some(red), format!("table {at_level:?}, curve {red}"));
    if let Some(conj) = curves.iter().find(|c| !is_level(c)) {
        let mut by_norm: BTreeMap<u64, (Vec<i64>, Vec<i64>)> = BTreeMap::new();
        let conj_aps: Vec<std::result::Result<i64, String>> =
            par.map_indexed(good.len(), &|i| conj.curve.ap(&good[i].conj()).map_err(|e| e.to_string()));
        for ((p, a), b) in good.iter().zip(&aps).zip(conj_aps) {
            let e = by_norm.entry(p.norm).or_default();
            e.0.push(*a);
            e.1.push(b.map_err(|e| KitError::internal("curve", e))?);
        }
        let same = by_norm.values_mut().all(|(a, b)| {
            a.sort();
            b.sort();
            a == b
        });
        rep.check("conjugate curve: same multiset per norm", same, conj.label.clone());
    }
    Ok(rep.finish())
}

/// The 9-class genus of half-discriminant 79, where `T₅` is a neighbor
/// operator: its scalar on `ker(T₂ + 5)`.
pub fn t5_on_level79_genus<P: ParMap>(par: &P) -> Result<i64> {
    let g = enumerate_genus(&builtin_q79(), 2, par).map_err(|e| KitError::internal("theorem1", e))?;
    let t2 = hecke_matrix(&g, 2, 1, par).map_err(|e| KitError::internal("theorem1", e))?;
    let v1 = kernel_int(&t2.matrix.add_scalar(&BigInt::from(5)).map_err(|e| KitError::internal("theorem1", e))?)
        .map_err(|e| KitError::internal("theorem1", e))?;
    let t5 = hecke_matrix(&g, 5, 1, par).map_err(|e| KitError::internal("theorem1", e))?;
    small(eigen_scalar_on(&g, &t5, &v1).map_err(|e| KitError::internal("theorem1", e))?, "theorem1")
}

/// Genus-side inputs: subspace dimensions and `T_p` scalars on `V₁` for
/// `primes` (5 is skipped), plus degree-2 scalars at 2 and 3.
pub fn theorem1_inputs<P: ParMap>(g: &GenusData, primes: &[u64], par: &P) -> Result<(Theorem1Inputs, [i64; 2])> {
    let err = |e: &dyn std::fmt::Display| KitError::internal("theorem1", e.to_string());
    let t2 = hecke_matrix(g, 2, 1, par).map_err(|e| err(&e))?;
    let (v1, v2, meet) = t2_subspaces(&t2)?;
    let mut inputs = Theorem1Inputs { class_count: g.len(), dim_v1: v1.dim(), dim_v2: v2.dim(), dim_meet_mod5: meet, scalars: BTreeMap::new() };
    let pivots = v1.pivots();
    for &p in primes {
        if p == 5 {
            continue;
        }
        let s = if p == 2 {
            eigen_scalar_on(g, &t2, &v1).map_err(|e| err(&e))?
        } else {
            let rows = hecke_rows(g, p, 1, &pivots, par).map_err(|e| err(&e))?;
            scalar_from_pivot_rows(&rows, &v1).map_err(|e| err(&e))?
        };
        inputs.scalars.insert(p, small(s, "theorem1")?);
    }
    let mut deg2 = [0i64; 2];
    for (slot, p) in deg2.iter_mut().zip([2u64, 3]) {
        let rows = hecke_rows(g, p, 2, &pivots, par).map_err(|e| err(&e))?;
        *slot = small(scalar_from_pivot_rows(&rows, &v1).map_err(|e| err(&e))?, "theorem1")?;
    }
    Ok((inputs, deg2))
}

/// The paramodular certificate: cross-table congruence mod λ, genus-side
/// dimensions and scalars, degree-2 calibration, and `T₅` on the level-79
/// genus when `t5` is given.
pub fn theorem1(
    inputs: &Theorem1Inputs,
    deg2: [i64; 2],
    t5: Option<i64>,
    para: &ParamodularTable,
    h: &EigenvalueTable,
) -> Result<CongruenceReport> {
    let map = residue_map("lambda5", &[h])?;
    let primes: Vec<u64> = para.nu.keys().copied().filter(|&p| p != para.level).collect();
    let jr = jr_compose(h, &primes, 1).map_err(|e| KitError::internal("theorem1", e))?;
    let mut rep = verify_theorem1(inputs, para, &jr, &map).map_err(|e| KitError::internal("theorem1", e))?;
    let eis = |p: i64| p + p * p + p * p * p + p * p * p * p;
    match (para.nu2.get(&2), para.nu2.get(&3)) {
        (Some(&n4), Some(&n9)) => {
            let predicted = calibrate_affine((eis(2), eis(2)), (deg2[0], n4)).map(|(a, b)| a * BigInt::from(deg2[1]) + b);
            let ok = predicted.as_ref().is_some_and(|x| x.is_integer() && x.to_integer() == BigInt::from(n9));
            let shown = predicted.map_or("none".to_string(), |x| x.to_string());
            rep.check("degree-2 calibration at 2 predicts nu_{1,9}", ok, format!("predicted {shown}, table {n9}"));
        }
        _ => rep.check("degree-2 calibration at 2 predicts nu_{1,9}", false, "table lacks nu2 at 2 or 3".to_string()),
    }
    if let Some(s) = t5 {
        let want = para.nu.get(&5).copied();
        rep.check("T_5 scalar on the level-79 genus", want == Some(s), format!("computed {s}, table {want:?}"));
    }
    Ok(rep.finish())
}

pub fn mod2(f: &EigenvalueTable, h: &EigenvalueTable, primes: Vec<PrimeIdealF>) -> Result<CongruenceReport> {
    let map = residue_map("q1", &[h])?;
    let level = level_prime(f)?;
    verify_mod2(f, h, &map, &level, Some(primes)).map_err(|e| KitError::internal("mod2", e))
}
