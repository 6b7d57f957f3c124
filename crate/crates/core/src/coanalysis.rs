//! Co-analyzability and fiberability by the constants on finite structures,
//! where every subset and every map counts as definable.
//!
//! On a finite structure every set is finite, so both notions are taken
//! with an explicit bound `e` on the size of the final sections.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transseries::Transseries;

pub type Tuple = Vec<usize>;

/// Upper bound on the number of witness candidates `|M|^d` tried per section.
pub const WITNESS_SEARCH_LIMIT: u128 = 1_000_000;

/// Universe `{0, …, size−1}` with a nonempty set of constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteStructure {
    pub size: usize,
    pub constants: BTreeSet<usize>,
}

impl FiniteStructure {
    pub fn new(size: usize, constants: impl IntoIterator<Item = usize>) -> Result<Self> {
        let s = FiniteStructure { size, constants: constants.into_iter().collect() };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.constants.is_empty() {
            return Err(Error::ShapeMismatch("the constant set is empty".into()));
        }
        if let Some(c) = self.constants.iter().find(|&&c| c >= self.size) {
            return Err(Error::ShapeMismatch(format!("constant {c} outside a universe of size {}", self.size)));
        }
        Ok(())
    }

    fn check_tuple(&self, t: &[usize], len: usize) -> Result<()> {
        if t.len() != len {
            return Err(Error::ShapeMismatch(format!("tuple of length {} where {len} was expected", t.len())));
        }
        if let Some(a) = t.iter().find(|&&a| a >= self.size) {
            return Err(Error::ShapeMismatch(format!("atom {a} outside the universe")));
        }
        Ok(())
    }
}

/// `(e, R₁, …, R_k)` with arities `d₁, …, d_{k−1}`. Tuples of `R_i` are laid
/// out as `(c, s, b_i, …, b_{k−1})` with `s ∈ M^n` and `b_j ∈ M^{d_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoAnalysisCertificate {
    pub e: usize,
    pub relations: Vec<BTreeSet<Tuple>>,
    pub dims: Vec<usize>,
}

impl CoAnalysisCertificate {
    pub fn steps(&self) -> usize {
        self.relations.len()
    }
}

/// Checks the recursive definition literally: `R_k` projects onto `S`, and
/// for every constant `c` some `b ∈ M^{d_{k−1}}` makes the sliced relations
/// a `(k−1)`-step co-analysis of the section `R_k(c)`.
pub fn check_certificate(
    structure: &FiniteStructure,
    n: usize,
    set: &BTreeSet<Tuple>,
    cert: &CoAnalysisCertificate,
) -> Result<bool> {
    structure.validate()?;
    let k = cert.steps();
    if k > 0 && cert.dims.len() != k - 1 {
        return Err(Error::ShapeMismatch(format!("{k} relations need {} arities, got {}", k - 1, cert.dims.len())));
    }
    if k == 0 && !cert.dims.is_empty() {
        return Err(Error::ShapeMismatch("arities given without relations".into()));
    }
    for t in set {
        structure.check_tuple(t, n)?;
    }
    for (i, rel) in cert.relations.iter().enumerate() {
        let len = 1 + n + cert.dims[i..].iter().sum::<usize>();
        for t in rel {
            structure.check_tuple(t, len)?;
            if !structure.constants.contains(&t[0]) {
                return Err(Error::ShapeMismatch(format!("first coordinate {} is not a constant", t[0])));
            }
        }
    }
    check_rec(structure, set, cert.e, &cert.relations, &cert.dims)
}

fn check_rec(
    structure: &FiniteStructure,
    set: &BTreeSet<Tuple>,
    e: usize,
    rels: &[BTreeSet<Tuple>],
    dims: &[usize],
) -> Result<bool> {
    let Some((top, lower)) = rels.split_last() else {
        return Ok(set.len() <= e);
    };
    let projection: BTreeSet<Tuple> = top.iter().map(|t| t[1..].to_vec()).collect();
    if &projection != set {
        return Ok(false);
    }
    for &c in &structure.constants {
        let section: BTreeSet<Tuple> = top.iter().filter(|t| t[0] == c).map(|t| t[1..].to_vec()).collect();
        if lower.is_empty() {
            if section.len() > e {
                return Ok(false);
            }
            continue;
        }
        let d = *dims.last().expect("one arity per lower relation");
        let candidates = (structure.size as u128).checked_pow(d as u32);
        if candidates.is_none_or(|m| m > WITNESS_SEARCH_LIMIT) {
            return Err(Error::SizeLimit(format!("witness search over M^{d} with |M| = {}", structure.size)));
        }
        let mut found = false;
        for b in all_tuples(structure.size, d) {
            let sliced: Vec<BTreeSet<Tuple>> = lower.iter().map(|r| slice_suffix(r, &b)).collect();
            if check_rec(structure, &section, e, &sliced, &dims[..dims.len() - 1])? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `R^b`: tuples ending in `b`, with `b` removed.
fn slice_suffix(rel: &BTreeSet<Tuple>, b: &[usize]) -> BTreeSet<Tuple> {
    rel.iter().filter(|t| t.ends_with(b)).map(|t| t[..t.len() - b.len()].to_vec()).collect()
}

/// All tuples in `{0..size}^len`, lexicographically.
pub fn all_tuples(size: usize, len: usize) -> impl Iterator<Item = Tuple> {
    let total = if len == 0 {
        1
    } else if size == 0 {
        0
    } else {
        size.pow(len as u32)
    };
    (0..total).map(move |mut k| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = k % size.max(1);
            k /= size.max(1);
        }
        t
    })
}

/// `|S| ≤ e·|C|^r`: sections of size at most `e` can be grouped into `|C|`
/// blocks per level, and nothing better is possible.
pub fn coanalyzable_bounded(structure: &FiniteStructure, set_size: usize, r: u32, e: usize) -> bool {
    let c = structure.constants.len() as u128;
    let cap = c.checked_pow(r).and_then(|p| p.checked_mul(e as u128));
    cap.is_none_or(|cap| set_size as u128 <= cap)
}

/// Witness for fiberability: a map to the constants at each level, down to
/// fibers of size at most `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Fibration {
    Finite(BTreeSet<Tuple>),
    Split {
        #[serde(serialize_with = "map_as_pairs")]
        map: BTreeMap<Tuple, usize>,
        fibers: BTreeMap<usize, Fibration>,
    },
}

/// Tuple keys are not JSON object keys, so the map is written as pairs.
fn map_as_pairs<S: serde::Serializer>(map: &BTreeMap<Tuple, usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(map.iter())
}

/// Backtracking search for `f: S → C` whose fibers are fiberable in one
/// step fewer. Fiberability is inherited by subsets, so partial fibers that
/// already fail prune the search.
pub fn fiberable_bounded(
    structure: &FiniteStructure,
    set: &BTreeSet<Tuple>,
    r: u32,
    e: usize,
) -> Result<Option<Fibration>> {
    structure.validate()?;
    let elems: Vec<Tuple> = set.iter().cloned().collect();
    if elems.len() > 63 {
        return Err(Error::SizeLimit("fiberability search over more than 63 tuples".into()));
    }
    let consts: Vec<usize> = structure.constants.iter().copied().collect();
    let mut search = FiberSearch { consts: &consts, e, memo: HashMap::new() };
    let full = if elems.is_empty() { 0 } else { u64::MAX >> (64 - elems.len()) };
    Ok(search.witness(full, r).map(|w| w.materialize(&elems, &consts)))
}

/// Fibration over bitmasks into the element list.
#[derive(Clone)]
enum MaskFibration {
    Finite(u64),
    Split(Vec<(usize, MaskFibration)>),
}

impl MaskFibration {
    fn materialize(&self, elems: &[Tuple], consts: &[usize]) -> Fibration {
        let members = |mask: u64| -> BTreeSet<Tuple> {
            (0..elems.len()).filter(|i| mask & (1 << i) != 0).map(|i| elems[i].clone()).collect()
        };
        match self {
            MaskFibration::Finite(m) => Fibration::Finite(members(*m)),
            MaskFibration::Split(parts) => {
                let mut map = BTreeMap::new();
                let mut fibers = BTreeMap::new();
                for (slot, sub) in parts {
                    let c = consts[*slot];
                    for t in sub.support(elems.len()) {
                        map.insert(elems[t].clone(), c);
                    }
                    fibers.insert(c, sub.materialize(elems, consts));
                }
                Fibration::Split { map, fibers }
            }
        }
    }

    fn support(&self, len: usize) -> Vec<usize> {
        let mask = self.mask();
        (0..len).filter(|i| mask & (1 << i) != 0).collect()
    }

    fn mask(&self) -> u64 {
        match self {
            MaskFibration::Finite(m) => *m,
            MaskFibration::Split(parts) => parts.iter().fold(0, |acc, (_, f)| acc | f.mask()),
        }
    }
}

struct FiberSearch<'a> {
    consts: &'a [usize],
    e: usize,
    memo: HashMap<(u64, u32), Option<MaskFibration>>,
}

impl FiberSearch<'_> {
    fn witness(&mut self, mask: u64, r: u32) -> Option<MaskFibration> {
        if mask.count_ones() as usize <= self.e {
            return Some(self.lift(mask, r));
        }
        if r == 0 {
            return None;
        }
        if let Some(w) = self.memo.get(&(mask, r)) {
            return w.clone();
        }
        let bits: Vec<usize> = (0..64).filter(|i| mask & (1 << i) != 0).collect();
        let mut fibers = vec![0u64; self.consts.len()];
        let found = self.assign(&bits, 0, &mut fibers, r);
        let w = found.map(MaskFibration::Split);
        self.memo.insert((mask, r), w.clone());
        w
    }

    /// Full-depth witness for a set already within the bound: everything
    /// goes to the first constant at every level.
    fn lift(&self, mask: u64, r: u32) -> MaskFibration {
        if r == 0 {
            MaskFibration::Finite(mask)
        } else {
            MaskFibration::Split(vec![(0, self.lift(mask, r - 1))])
        }
    }

    fn assign(
        &mut self,
        bits: &[usize],
        next: usize,
        fibers: &mut [u64],
        r: u32,
    ) -> Option<Vec<(usize, MaskFibration)>> {
        if next == bits.len() {
            let mut parts = Vec::new();
            for (slot, &f) in fibers.iter().enumerate() {
                if f != 0 {
                    parts.push((slot, self.witness(f, r - 1)?));
                }
            }
            return Some(parts);
        }
        // Constants are interchangeable: open at most one new fiber per step.
        let used = fibers.iter().rposition(|&f| f != 0).map_or(0, |p| p + 1);
        for slot in 0..(used + 1).min(fibers.len()) {
            fibers[slot] |= 1 << bits[next];
            if self.witness(fibers[slot], r - 1).is_some() {
                if let Some(parts) = self.assign(bits, next + 1, fibers, r) {
                    fibers[slot] &= !(1 << bits[next]);
                    return Some(parts);
                }
            }
            fibers[slot] &= !(1 << bits[next]);
        }
        None
    }
}

/// Turns a fibration of depth `r` into an `r`-step co-analysis whose
/// sections are the fibers, using one witness coordinate per level that
/// records the constant.
pub fn certificate_from_fibration(fib: &Fibration, r: u32, e: usize) -> CoAnalysisCertificate {
    let relations = relations_of(fib, r);
    CoAnalysisCertificate { e, relations, dims: vec![1; (r as usize).saturating_sub(1)] }
}

fn relations_of(fib: &Fibration, r: u32) -> Vec<BTreeSet<Tuple>> {
    if r == 0 {
        return Vec::new();
    }
    let (map, fibers) = match fib {
        Fibration::Split { map, fibers } => (map, fibers),
        Fibration::Finite(_) => unreachable!("fibrations produced by the search have full depth"),
    };
    let mut out: Vec<BTreeSet<Tuple>> = vec![BTreeSet::new(); r as usize];
    out[r as usize - 1] = map.iter().map(|(s, c)| std::iter::once(*c).chain(s.iter().copied()).collect()).collect();
    for (c, sub) in fibers {
        for (i, rel) in relations_of(sub, r - 1).into_iter().enumerate() {
            out[i].extend(rel.into_iter().map(|mut t| {
                t.push(*c);
                t
            }));
        }
    }
    out
}

/// Outcome of the dagger fibration check on `{a·e^{bx}} ∪ {0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DaggerDemoReport {
    pub samples: usize,
    pub fibers: usize,
    pub all_solve_equation: bool,
    pub constant_on_classes: bool,
    pub separates_classes: bool,
    pub fibers_are_scalar_orbits: bool,
}

impl DaggerDemoReport {
    pub fn passed(&self) -> bool {
        self.all_solve_equation && self.constant_on_classes && self.separates_classes && self.fibers_are_scalar_orbits
    }
}

/// Samples `y = a·e^{bx}` for `a ∈ {−2..2}∖{0}`, `b ∈ {−2..2}`, together
/// with `y = 0`, and checks that `f(y) = y†` (with `f(0) = 0`) fibers the
/// zero set of `Y·Y″ − (Y′)²` with fibers `C^×·e^{bx}` (plus `0` over `0`).
pub fn dagger_fiberability_demo() -> Result<DaggerDemoReport> {
    let y = |r| crate::diffpoly::DiffPolynomial::var(1, 1, r).expect("arity 1");
    let eq = y(0).mul(&y(2))?.sub(&y(1).pow(2))?;
    let grid: Vec<i64> = (-2..=2).collect();

    let mut samples: Vec<(Option<(i64, i64)>, Transseries)> = vec![(None, Transseries::zero())];
    for &b in &grid {
        for &a in grid.iter().filter(|&&a| a != 0) {
            let eb = Transseries::x().scale(&crate::exact_algebra::int(b)).exp_large()?;
            samples.push((Some((a, b)), eb.scale(&crate::exact_algebra::int(a))));
        }
    }

    let mut all_solve = true;
    let mut by_value: HashMap<Transseries, Vec<usize>> = HashMap::new();
    let mut by_class: BTreeMap<i64, HashSet<Transseries>> = BTreeMap::new();
    for (k, (ab, s)) in samples.iter().enumerate() {
        all_solve &= eq.evaluate(std::slice::from_ref(s))?.is_zero();
        let f = if s.is_zero() { Transseries::zero() } else { s.dagger()? };
        by_value.entry(f.clone()).or_default().push(k);
        by_class.entry(ab.map_or(0, |(_, b)| b)).or_default().insert(f);
    }

    let constant_on_classes = by_class.values().all(|fs| fs.len() == 1);
    let class_values: HashSet<&Transseries> = by_class.values().flatten().collect();
    let separates_classes = class_values.len() == by_class.len();

    let mut orbits = true;
    for (f, members) in &by_value {
        let Some(b) = f.as_constant() else {
            orbits = false;
            continue;
        };
        let expected: BTreeSet<usize> = samples
            .iter()
            .enumerate()
            .filter(|(_, (ab, _))| match ab {
                Some((_, bb)) => crate::exact_algebra::int(*bb) == b,
                None => num_traits::Zero::is_zero(&b),
            })
            .map(|(k, _)| k)
            .collect();
        let got: BTreeSet<usize> = members.iter().copied().collect();
        orbits &= got == expected;
        // Second step: y ↦ y·e^{−bx} is injective into C on the fiber.
        let scale = Transseries::x().scale(&-&b).exp_large()?;
        let images: HashSet<Transseries> = members.iter().map(|&k| &samples[k].1 * &scale).collect();
        orbits &= images.len() == members.len() && images.iter().all(Transseries::is_constant);
    }

    Ok(DaggerDemoReport {
        samples: samples.len(),
        fibers: by_value.len(),
        all_solve_equation: all_solve,
        constant_on_classes,
        separates_classes,
        fibers_are_scalar_orbits: orbits,
    })
}
