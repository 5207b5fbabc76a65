//! Verification suites: named checks over one `(n, q)` that together cover
//! field arithmetic, the building, the flip geometries and the centralizers.
//!
//! Every check is deterministic given the seed; each one draws from its own
//! generator so that selecting a suite does not change any result.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::building::{self, Chamber, PolarFrame};
use crate::classify::{canonical_flip, classify, class_scalar, ClassifiedFlip, FlipClass};
use crate::error::{Error, Result};
use crate::field::{FieldParams, Fq2};
use crate::geometry::{build_geometry, check_residue, disc, Geometry, Variant, INCIDENCE_LIMIT};
use crate::linalg::{self, Matrix};
use crate::random;
use crate::semilinear::SemilinearMap;
use crate::space::{HermitianSpace, Twist};
use crate::stabilizer::{self, predicted_group};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Field,
    Building,
    Geometry,
    Groups,
    Transitivity,
}

impl Suite {
    pub const PARTS: [Suite; 5] =
        [Suite::Field, Suite::Building, Suite::Geometry, Suite::Groups, Suite::Transitivity];
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "field" => Ok(Suite::Field),
            "building" => Ok(Suite::Building),
            "geometry" => Ok(Suite::Geometry),
            "groups" => Ok(Suite::Groups),
            "transitivity" => Ok(Suite::Transitivity),
            other => Err(Error::InvalidParams(format!("unknown suite {other:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    /// Only filled in when timings are requested, so reports stay reproducible.
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub q: u32,
    /// `None` runs every class.
    pub class: Option<FlipClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub params: Params,
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Parameters shared by all checks.
#[derive(Clone, Debug)]
pub struct Config {
    pub n: usize,
    pub q: u32,
    pub class: Option<FlipClass>,
    pub seed: u64,
    /// Guard on the number of subspaces any enumeration may produce.
    pub limit: u128,
    /// Random chamber pairs per flip and variant.
    pub pairs: usize,
    /// Random unitary conjugates per class.
    pub conjugates: usize,
    /// Random nested object pairs per semilinear flip.
    pub nested: usize,
    /// Largest `q^8` the rank-one brute force may run over.
    pub brute_force_limit: u128,
    pub timings: bool,
}

impl Config {
    pub fn new(n: usize, q: u32) -> Self {
        Self {
            n,
            q,
            class: None,
            seed: 0,
            limit: building::DEFAULT_ENUMERATION_LIMIT,
            pairs: 200,
            conjugates: 100,
            nested: 200,
            brute_force_limit: 100_000_000,
            timings: false,
        }
    }

    fn classes(&self) -> Vec<FlipClass> {
        match self.class {
            Some(c) => vec![c],
            None => FlipClass::ALL.to_vec(),
        }
    }

    fn semilinear_classes(&self) -> Vec<FlipClass> {
        self.classes().into_iter().filter(|c| !c.is_linear()).collect()
    }

    fn space(&self) -> Result<HermitianSpace> {
        HermitianSpace::standard(self.n, FieldParams::new(self.q)?)
    }

    fn flip(&self, class: FlipClass) -> Result<ClassifiedFlip> {
        let space = self.space()?;
        classify(&space, &canonical_flip(&space, class))
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Result of a single check before it is named and timed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub detail: String,
}

impl Outcome {
    pub fn pass(detail: impl Into<String>) -> Self {
        Self { status: Status::Pass, detail: detail.into() }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Self { status: Status::Fail, detail: detail.into() }
    }

    pub fn skipped(detail: impl Into<String>) -> Self {
        Self { status: Status::Skipped, detail: detail.into() }
    }

    fn from_failures(failures: Vec<String>, ok: String) -> Self {
        if failures.is_empty() {
            Self::pass(ok)
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
            Self::fail(format!("{} failure(s): {}", failures.len(), shown.join("; ")))
        }
    }
}

pub type CheckFn = fn(&Config) -> Result<Outcome>;

/// The checks of a suite, in report order.
pub fn checks(suite: Suite) -> Vec<(&'static str, CheckFn)> {
    match suite {
        Suite::All => Suite::PARTS.iter().flat_map(|s| checks(*s)).collect(),
        Suite::Field => vec![
            ("field_arithmetic", field_arithmetic as CheckFn),
            ("form_properties", form_properties),
            ("normalization_scalar", normalization_scalar),
        ],
        Suite::Building => vec![
            ("building_counts", building_counts as CheckFn),
            ("apartment", apartment),
            ("polar_laws", polar_laws),
            ("opposition_invariance", opposition_invariance),
            ("opposite_iff_nondegenerate", opposite_iff_nondegenerate),
        ],
        Suite::Geometry => vec![
            ("classification_round_trip", classification_round_trip as CheckFn),
            ("conjugation_stability", conjugation_stability),
            ("multiform_identities", multiform_identities),
            ("geometry_well_formed", geometry_well_formed),
            ("semilinear_type_theory", semilinear_type_theory),
        ],
        Suite::Groups => vec![
            ("group_identification", group_identification as CheckFn),
            ("gram_equalizing_basis", gram_equalizing_basis),
            ("orthogonal_type_consistency", orthogonal_type_consistency),
            ("stabilizer_block_form", stabilizer_block_form),
        ],
        Suite::Transitivity => vec![
            ("flag_transitivity", flag_transitivity as CheckFn),
            ("transporter_closure", transporter_closure),
        ],
    }
}

/// Looks a check up by its report name.
pub fn check_by_name(name: &str) -> Option<CheckFn> {
    checks(Suite::All).into_iter().find(|(n, _)| *n == name).map(|(_, f)| f)
}

/// Runs one check, turning errors into failures.
pub fn run_check(name: &str, check: CheckFn, cfg: &Config) -> Check {
    let start = Instant::now();
    let outcome = match check(cfg) {
        Ok(o) => o,
        Err(Error::EnumerationTooLarge { estimate, limit }) => {
            Outcome::skipped(format!("enumeration of {estimate} objects exceeds the guard {limit}"))
        }
        Err(e) => Outcome::fail(format!("error: {e}")),
    };
    Check {
        name: name.to_string(),
        status: outcome.status,
        detail: outcome.detail,
        elapsed_ms: cfg.timings.then(|| start.elapsed().as_millis() as u64),
    }
}

pub fn run_suite(suite: Suite, cfg: &Config) -> VerificationReport {
    let checks: Vec<Check> =
        checks(suite).into_iter().map(|(name, f)| run_check(name, f, cfg)).collect();
    let mut summary = Summary::default();
    for c in &checks {
        match c.status {
            Status::Pass => summary.passed += 1,
            Status::Fail => summary.failed += 1,
            Status::Skipped => summary.skipped += 1,
        }
    }
    VerificationReport {
        params: Params { n: cfg.n, q: cfg.q, class: cfg.class },
        suite,
        seed: cfg.seed,
        checks,
        summary,
    }
}

/// `[m choose k]` over `F_{q^2}`.
fn gaussian_binomial(m: usize, k: usize, q: u32) -> u128 {
    let qq = (q as u128).pow(2);
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num = num.saturating_mul(qq.pow((m - i) as u32) - 1);
        den = den.saturating_mul(qq.pow((i + 1) as u32) - 1);
    }
    num / den
}

// ---- field ----

fn field_arithmetic(cfg: &Config) -> Result<Outcome> {
    let k = FieldParams::new(cfg.q)?;
    let q = cfg.q as usize;
    let elems: Vec<Fq2> = k.elements().collect();
    let mut failures = Vec::new();

    let pairs: Vec<(Fq2, Fq2)> = if elems.len().pow(2) <= 10_000_000 {
        elems.iter().flat_map(|&a| elems.iter().map(move |&b| (a, b))).collect()
    } else {
        let mut rng = cfg.rng(1);
        (0..100_000).map(|_| (random::element(k, &mut rng), random::element(k, &mut rng))).collect()
    };
    let bad_pairs = pairs
        .par_iter()
        .filter(|&&(a, b)| {
            (a * b).frobenius() != a.frobenius() * b.frobenius()
                || (a + b).frobenius() != a.frobenius() + b.frobenius()
                || (a * b).norm() != a.norm() * b.norm()
                || (a + b).trace() != a.trace() + b.trace()
                || (b.is_base() && (b * a).trace() != b.to_base().expect("base") * a.trace())
        })
        .count();
    if bad_pairs > 0 {
        failures.push(format!("{bad_pairs} pairs break the automorphism, norm or trace laws"));
    }

    let mut norms = BTreeSet::new();
    let mut traces = BTreeSet::new();
    let mut squares = 0;
    for &a in &elems {
        if a.frobenius().frobenius() != a {
            failures.push(format!("σ² ≠ id at {a}"));
        }
        if (a.frobenius() == a) != (a.a1() == 0) {
            failures.push(format!("fixed field wrong at {a}"));
        }
        norms.insert(a.norm().value());
        traces.insert(a.trace().value());
        if a.is_zero() {
            continue;
        }
        if !(a * a.inv()?).is_one() {
            failures.push(format!("inverse wrong at {a}"));
        }
        if a.is_square()? {
            squares += 1;
            let r = a.sqrt()?;
            if r * r != a {
                failures.push(format!("square root wrong at {a}"));
            }
        } else if a.norm().is_square() {
            failures.push(format!("non-square {a} has a square norm"));
        }
    }
    if norms.len() != q || traces.len() != q {
        failures.push("norm or trace is not onto F_q".into());
    }
    if squares != (q * q - 1) / 2 {
        failures.push(format!("{squares} nonzero squares, expected {}", (q * q - 1) / 2));
    }
    Ok(Outcome::from_failures(
        failures,
        format!("{} elements, {} pairs; r = {}", elems.len(), pairs.len(), k.r()),
    ))
}

fn form_properties(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let mut rng = cfg.rng(2);
    let mut failures = Vec::new();
    let mut count = 0;
    for class in cfg.classes() {
        let canon = canonical_flip(&space, class);
        let mut maps = vec![canon.clone()];
        for _ in 0..10 {
            maps.push(canon.conjugate_by(&random::unitary(&space, &mut rng)?)?);
        }
        for map in maps {
            let flip = classify(&space, &map)?;
            let m = &flip.form().gram;
            let ok_shape = match class {
                FlipClass::I => m.frobenius().transpose() == *m,
                FlipClass::II => m.frobenius().transpose() == m.scale(-space.field().one()),
                FlipClass::III | FlipClass::IV => m.transpose() == *m,
            };
            if !ok_shape {
                failures.push(format!("class {class}: wrong symmetry"));
            }
            if m.det()?.is_zero() {
                failures.push(format!("class {class}: degenerate"));
            }
            for _ in 0..20 {
                let u = random::vector_in(&space.whole(), &mut rng);
                let v = random::vector_in(&space.whole(), &mut rng);
                if flip.beta_phi(&u, &v).is_zero() != flip.beta_phi(&v, &u).is_zero() {
                    failures.push(format!("class {class}: not reflexive"));
                }
            }
            count += 1;
        }
    }
    Ok(Outcome::from_failures(failures, format!("{count} induced forms")))
}

fn normalization_scalar(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let mut rng = cfg.rng(3);
    let classes = cfg.classes();
    let mut failures = Vec::new();
    for i in 0..100 {
        let class = classes[i % classes.len()];
        let c = random::nonzero_element(space.field(), &mut rng);
        let f = canonical_flip(&space, class).scaled(c)?;
        let lambda = f.is_projective_involution().ok_or(Error::NotInvolution)?;
        let a = f.similitude_factor(&space)?;
        if lambda.norm() != a * a {
            failures.push(format!("class {class}, scale {c}: N(λ) ≠ a²"));
        }
        if classify(&space, &f)?.class != class {
            failures.push(format!("class {class}, scale {c}: class changed"));
        }
    }
    Ok(Outcome::from_failures(failures, "100 scalar multiples".into()))
}

// ---- building ----

/// Brute-force count of chambers from totally isotropic subspaces of each
/// dimension, chained by containment.
fn brute_force_chambers(levels: &[Vec<Subspace>]) -> u128 {
    let mut counts: HashMap<&Subspace, u128> = levels[0].iter().map(|p| (p, 1)).collect();
    for level in &levels[1..] {
        let prev = counts;
        counts = level
            .iter()
            .map(|u| (u, prev.iter().filter(|(v, _)| u.contains(v)).map(|(_, c)| *c).sum()))
            .collect();
    }
    counts.values().sum()
}

fn building_counts(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let (n, q) = (cfg.n, cfg.q);
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    let mut skipped = Vec::new();
    let mut levels: Vec<Vec<Subspace>> = Vec::new();
    for k in 1..=n {
        let formula = building::isotropic_count(n, q, k);
        let all = gaussian_binomial(2 * n, k, q);
        if all > cfg.limit || formula > cfg.limit {
            skipped.push(format!("dim {k}: {all} subspaces exceed the guard"));
            continue;
        }
        let brute: Vec<Subspace> = building::all_subspaces(space.field(), 2 * n, k)
            .into_par_iter()
            .filter(|u| space.is_totally_isotropic(u))
            .collect();
        let by_level = building::enumerate_isotropic(&space, k, cfg.limit)?;
        if brute.len() as u128 != formula || by_level.len() as u128 != formula {
            failures.push(format!(
                "dim {k}: brute force {}, enumeration {}, formula {formula}",
                brute.len(),
                by_level.len()
            ));
        }
        notes.push(format!("dim {k}: {formula}"));
        levels.push(brute);
    }
    let formula = building::chamber_count(n, q);
    if levels.len() == n && formula <= cfg.limit {
        let brute = brute_force_chambers(&levels);
        let enumerated = building::enumerate_chambers(&space, cfg.limit)?.len() as u128;
        if brute != formula || enumerated != formula {
            failures.push(format!("chambers: brute force {brute}, enumeration {enumerated}, formula {formula}"));
        }
        notes.push(format!("chambers: {formula}"));
    } else {
        skipped.push(format!("chamber enumeration skipped: {formula} chambers exceed the guard"));
    }
    if !failures.is_empty() {
        return Ok(Outcome::from_failures(failures, String::new()));
    }
    let mut detail = notes.join(", ");
    if !skipped.is_empty() {
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        detail.push_str(&skipped.join("; "));
        return Ok(Outcome::skipped(detail));
    }
    Ok(Outcome::pass(detail))
}

fn apartment(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let n = cfg.n;
    let mut failures = Vec::new();
    let standard: Vec<_> = (0..n).map(|i| space.e(i)).chain((0..n).map(|i| space.f(i))).collect();
    let mut rng = cfg.rng(4);
    let random_basis = random::hyperbolic_basis(&space, &mut rng)?;
    for (label, basis) in [("standard", &standard), ("random", &random_basis)] {
        let frame = PolarFrame::from_basis(&space, basis)?;
        let chambers = building::apartment(&space, &frame);
        if chambers.len() as u128 != building::apartment_size(n) {
            failures.push(format!("{label} apartment has {} chambers", chambers.len()));
        }
        let e = Chamber::from_vectors(&space, &basis[..n])?;
        let f = Chamber::from_vectors(&space, &basis[n..])?;
        if !chambers.contains(&e) || !chambers.contains(&f) || !building::is_opposite(&space, &e, &f) {
            failures.push(format!("{label} apartment lacks the opposite e- and f-chambers"));
        }
        let no_partner = chambers
            .iter()
            .filter(|c| !chambers.iter().any(|d| building::is_opposite(&space, c, d)))
            .count();
        if no_partner > 0 {
            failures.push(format!("{label}: {no_partner} chambers without an opposite"));
        }
    }
    Ok(Outcome::from_failures(failures, format!("{} chambers per apartment", building::apartment_size(n))))
}

fn polar_laws(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let m = space.dim();
    let mut rng = cfg.rng(5);
    let exhaustive = gaussian_binomial(m, m / 2, cfg.q) * (m as u128 + 1) <= 10_000;
    let subspaces: Vec<Subspace> = if exhaustive {
        (0..=m).flat_map(|k| building::all_subspaces(space.field(), m, k)).collect()
    } else {
        (0..100).map(|i| random::subspace_in(&space.whole(), i % (m + 1), &mut rng)).collect()
    };
    let mut failures = Vec::new();
    for u in &subspaces {
        let p = space.perp(u);
        if u.dim() + p.dim() != m || space.perp(&p) != *u {
            failures.push(format!("dim {} subspace breaks the perp laws", u.dim()));
        }
    }
    for _ in 0..100 {
        let w = space.whole();
        let (u, v, x) = (random::vector_in(&w, &mut rng), random::vector_in(&w, &mut rng), random::vector_in(&w, &mut rng));
        let c = random::element(space.field(), &mut rng);
        let b = |a: &[Fq2], z: &[Fq2]| space.beta(a, z).expect("lengths match");
        if b(&v, &u) != b(&u, &v).frobenius()
            || b(&linalg::add(&linalg::scale(c, &u), &x), &v) != c * b(&u, &v) + b(&x, &v)
            || b(&u, &linalg::scale(c, &v)) != c.frobenius() * b(&u, &v)
        {
            failures.push("β is not hermitian-sesquilinear on a sample".into());
        }
    }
    let how = if exhaustive { "all" } else { "random" };
    Ok(Outcome::from_failures(failures, format!("{} {how} subspaces", subspaces.len())))
}

fn random_chamber<R: Rng>(space: &HermitianSpace, rng: &mut R) -> Result<Chamber> {
    let basis = random::hyperbolic_basis(space, rng)?;
    Chamber::from_vectors(space, &basis[..space.n()])
}

fn opposition_invariance(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let mut rng = cfg.rng(6);
    let mut failures = Vec::new();
    let mut opposite = 0;
    for i in 0..100 {
        let c = random_chamber(&space, &mut rng)?;
        // Alternate between independent chambers and chambers sharing C's first member.
        let d = if i % 2 == 0 {
            random_chamber(&space, &mut rng)?
        } else {
            let h = random::unitary(&space, &mut rng)?;
            let img = c.image(&SemilinearMap::new(h, Twist::Identity)?);
            let mut flag = img.flag().to_vec();
            flag[0] = c.get(0).clone();
            match Chamber::new(&space, flag) {
                Ok(d) => d,
                Err(_) => img,
            }
        };
        let class = FlipClass::ALL[i % 4];
        let scale = random::nonzero_element(space.field(), &mut rng);
        let g = if i % 3 == 0 {
            canonical_flip(&space, class).scaled(scale)?
        } else {
            SemilinearMap::new(random::unitary(&space, &mut rng)?, Twist::Identity)?.scaled(scale)?
        };
        let before = building::is_opposite(&space, &c, &d);
        opposite += before as usize;
        if before != building::is_opposite(&space, &c.image(&g), &d.image(&g)) {
            failures.push(format!("sample {i}: opposition not preserved"));
        }
    }
    Ok(Outcome::from_failures(failures, format!("100 pairs, {opposite} opposite")))
}

fn opposite_iff_nondegenerate(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let chambers = building::enumerate_chambers(&space, cfg.limit)?;
    let formula = building::chamber_count(cfg.n, cfg.q);
    let mut failures = Vec::new();
    if chambers.len() as u128 != formula {
        failures.push(format!("{} chambers enumerated, formula {formula}", chambers.len()));
    }
    let mut sizes = Vec::new();
    for class in cfg.classes() {
        let map = canonical_flip(&space, class);
        let opposite = building::delta_phi(&space, &map, &chambers);
        let nondeg = building::nondegenerate_chambers(&map.induced_form(&space), &chambers);
        if opposite != nondeg {
            failures.push(format!("class {class}: {} opposite vs {} nondegenerate", opposite.len(), nondeg.len()));
        }
        sizes.push(format!("{class}: {}", opposite.len()));
    }
    Ok(Outcome::from_failures(
        failures,
        format!("{} chambers; sent to opposite: {}", chambers.len(), sizes.join(", ")),
    ))
}

// ---- geometry ----

fn classification_round_trip(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let mut failures = Vec::new();
    for class in cfg.classes() {
        let flip = classify(&space, &canonical_flip(&space, class))?;
        if flip.class != class {
            failures.push(format!("class {class} classified as {}", flip.class));
        }
        if !flip.relations_hold(&flip.basis) {
            failures.push(format!("class {class}: witness basis fails the relations"));
        }
        if flip.scalar != class_scalar(&space, class) {
            failures.push(format!("class {class}: unexpected scalar {}", flip.scalar));
        }
    }
    Ok(Outcome::from_failures(failures, format!("{} classes", cfg.classes().len())))
}

fn conjugation_stability(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let mut rng = cfg.rng(7);
    let mut samples = Vec::new();
    for class in cfg.classes() {
        for _ in 0..cfg.conjugates {
            samples.push((class, random::unitary(&space, &mut rng)?));
        }
    }
    let failures: Vec<String> = samples
        .par_iter()
        .filter_map(|(class, g)| {
            let map = canonical_flip(&space, *class).conjugate_by(g).ok()?;
            match classify(&space, &map) {
                Ok(f) if f.class == *class && f.relations_hold(&f.basis) => None,
                Ok(f) => Some(format!("class {class} conjugate classified as {}", f.class)),
                Err(e) => Some(format!("class {class} conjugate: {e}")),
            }
        })
        .collect();
    Ok(Outcome::from_failures(failures, format!("{} conjugates", samples.len())))
}

fn multiform_identities(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let mut rng = cfg.rng(8);
    let mut failures = Vec::new();
    for class in cfg.classes() {
        let flip = cfg.flip(class)?;
        for i in 0..50 {
            let u = random::subspace_in(&space.whole(), 1 + i % space.dim(), &mut rng);
            let fu = flip.map.image(&u);
            if space.perp(&u) != flip.form().perp(&fu) {
                failures.push(format!("class {class}: U^⊥ ≠ φ(U)^⊥φ"));
            }
            let both = u.sum(&fu);
            let bi = flip.biorthogonal_complement(&u);
            if space.perp(&both) != bi || flip.form().perp(&both) != bi {
                failures.push(format!("class {class}: ⟨U, φ(U)⟩ complements differ"));
            }
        }
    }
    Ok(Outcome::from_failures(failures, "50 random subspaces per class".into()))
}

fn variants_for(class: FlipClass) -> Vec<Variant> {
    if class.is_linear() {
        vec![Variant::Full]
    } else {
        vec![Variant::Full, Variant::Plus, Variant::Minus]
    }
}

/// Skips geometry checks whose pairwise incidence work would be too large,
/// judged by the number of totally isotropic subspaces.
fn incidence_guard(cfg: &Config) -> Option<Outcome> {
    let estimate: u128 = (1..=cfg.n).map(|k| building::isotropic_count(cfg.n, cfg.q, k)).sum();
    (estimate > INCIDENCE_LIMIT as u128).then(|| {
        Outcome::skipped(format!(
            "{estimate} isotropic subspaces exceed the incidence guard {INCIDENCE_LIMIT}"
        ))
    })
}

fn geometry_well_formed(cfg: &Config) -> Result<Outcome> {
    if let Some(skip) = incidence_guard(cfg) {
        return Ok(skip);
    }
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for class in cfg.classes() {
        let flip = cfg.flip(class)?;
        let space = flip.space();
        for variant in variants_for(class) {
            let geom = build_geometry(&flip, variant, cfg.limit)?;
            let tag = format!("{class}/{variant}");
            if !geom.is_transversal() {
                failures.push(format!("{tag}: not transversal"));
            }
            let top = &geom.objects[cfg.n - 1];
            let not_in_max = geom
                .all_objects()
                .filter(|o| !top.iter().any(|m| m.sub.contains(&o.sub)))
                .count();
            if not_in_max > 0 {
                failures.push(format!("{tag}: {not_in_max} objects in no maximal object"));
            }
            if variant == Variant::Full {
                let bad = geom
                    .all_objects()
                    .filter(|o| {
                        let both = o.sub.sum(&flip.map.image(&o.sub));
                        both.dim() != 2 * o.dim() || !space.form().is_nondegenerate_on(&both)
                    })
                    .count();
                if bad > 0 {
                    failures.push(format!("{tag}: {bad} objects with degenerate ⟨W, φ(W)⟩"));
                }
            }
            if cfg.n >= 2 {
                let bad: Vec<String> = geom
                    .points()
                    .par_iter()
                    .filter_map(|p| match check_residue(&geom, &flip, &p.sub, cfg.limit) {
                        Ok(r) if r.ok() => None,
                        Ok(r) => Some(format!("{tag}: residue check {r:?}")),
                        Err(e) => Some(format!("{tag}: residue error {e}")),
                    })
                    .collect();
                failures.extend(bad);
            }
            notes.push(format!("{tag} {:?}", geom.counts_by_dim()));
        }
    }
    Ok(Outcome::from_failures(failures, notes.join(", ")))
}

fn point_type(flip: &ClassifiedFlip, p: &[Fq2]) -> Option<bool> {
    let s = flip.beta_phi(p, p);
    (!s.is_zero()).then(|| s.is_square().expect("nonzero"))
}

fn semilinear_type_theory(cfg: &Config) -> Result<Outcome> {
    let classes = cfg.semilinear_classes();
    if classes.is_empty() {
        return Ok(Outcome::skipped("needs a semilinear class"));
    }
    if let Some(skip) = incidence_guard(cfg) {
        return Ok(skip);
    }
    let mut rng = cfg.rng(9);
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for class in classes {
        let flip = cfg.flip(class)?;
        let space = flip.space();
        let geom: Geometry = build_geometry(&flip, Variant::Full, cfg.limit)?;
        let want: i8 = if class == FlipClass::III { 1 } else { -1 };
        let off = geom.objects[cfg.n - 1].iter().filter(|o| o.disc != Some(want)).count();
        if off > 0 {
            failures.push(format!("{class}: {off} maximal objects with disc ≠ {want}"));
        }
        if cfg.n >= 2 {
            let one_sided = geom.objects[1]
                .par_iter()
                .filter(|l| {
                    let types: BTreeSet<bool> = l.sub.points().filter_map(|p| point_type(&flip, &p)).collect();
                    types.len() != 2
                })
                .count();
            if one_sided > 0 {
                failures.push(format!("{class}: {one_sided} lines missing a point type"));
            }
        }
        let all: Vec<&Subspace> = geom.all_objects().map(|o| &o.sub).collect();
        for _ in 0..cfg.nested {
            let outer = all[rng.gen_range(0..all.len())];
            let inner_choices: Vec<&Subspace> = all.iter().copied().filter(|u| outer.contains(u)).collect();
            let inner = inner_choices[rng.gen_range(0..inner_choices.len())];
            let w = flip.biorthogonal_complement(inner).intersect(outer);
            let dw = if w.dim() == 0 { 1 } else { disc(&flip, &w)? };
            if disc(&flip, outer)? != disc(&flip, inner)? * dw {
                failures.push(format!("{class}: disc not multiplicative"));
            }
        }
        let mixed = geom
            .points()
            .par_iter()
            .filter(|u| {
                let v = u.sub.basis()[0].clone();
                let t = point_type(&flip, &v);
                let plane = u.sub.sum(&flip.map.image(&u.sub));
                plane.points().any(|p| space.is_isotropic(&p) && point_type(&flip, &p).is_some_and(|s| Some(s) != t))
            })
            .count();
        if mixed > 0 {
            failures.push(format!("{class}: {mixed} planes ⟨u, φ(u)⟩ with mixed point types"));
        }
        notes.push(format!("{class}: {:?} (square, non-square) per dim", geom.disc_histogram_by_dim()));
    }
    Ok(Outcome::from_failures(failures, notes.join("; ")))
}

// ---- groups ----

fn group_identification(cfg: &Config) -> Result<Outcome> {
    let cost = (cfg.q as u128).pow(8);
    if cost > cfg.brute_force_limit {
        return Ok(Outcome::skipped(format!("q^8 = {cost} exceeds the brute-force guard")));
    }
    let space = HermitianSpace::standard(1, FieldParams::new(cfg.q)?)?;
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for class in cfg.classes() {
        let flip = classify(&space, &canonical_flip(&space, class))?;
        let predicted = predicted_group(&flip);
        let counted = stabilizer::enumerate_stabilizer_order(&flip)?;
        if counted != predicted.order {
            failures.push(format!("{class}: counted {counted}, predicted {} = {}", predicted.family, predicted.order));
        }
        notes.push(format!("{class}: {} of order {counted}", predicted.family));
    }
    let at_n: Vec<String> = cfg
        .classes()
        .into_iter()
        .map(|c| cfg.flip(c).map(|f| format!("{c}: {}", predicted_group(&f).order)))
        .collect::<Result<_>>()?;
    Ok(Outcome::from_failures(
        failures,
        format!("n = 1 brute force {}; predicted at n = {}: {}", notes.join(", "), cfg.n, at_n.join(", ")),
    ))
}

fn gram_equalizing_basis(cfg: &Config) -> Result<Outcome> {
    let classes = cfg.semilinear_classes();
    if classes.is_empty() {
        return Ok(Outcome::skipped("needs a semilinear class"));
    }
    let mut failures = Vec::new();
    for class in classes {
        let flip = cfg.flip(class)?;
        let k = flip.space().field();
        let basis = stabilizer::gram_equalizing_basis(&flip)?;
        if flip.space().form().gram_of(&basis) != flip.form().gram_of(&basis) {
            failures.push(format!("{class}: Gram matrices differ"));
        }
        if basis.iter().any(|h| flip.apply(h) != *h) {
            failures.push(format!("{class}: a basis vector is not fixed"));
        }
        let blocks = stabilizer::gram_blocks(&flip, &basis)?;
        let (two, two_r) = (k.fq(2), k.fq(2 * k.r() as u64));
        let lambda = flip.scalar;
        let alpha = k.trace_zero_unit();
        let off = (alpha * (lambda.frobenius() - lambda)).to_base().ok_or(Error::WrongClass)?;
        for (i, b) in blocks.iter().enumerate() {
            let want = if class == FlipClass::IV && i == cfg.n - 1 {
                [[lambda.trace(), off], [off, k.fq(k.r() as u64) * lambda.trace()]]
            } else {
                [[two, k.fq(0)], [k.fq(0), two_r]]
            };
            if *b != want {
                failures.push(format!("{class}: block {} has the wrong shape", i + 1));
            }
        }
        if class == FlipClass::IV {
            let m = blocks[cfg.n - 1];
            if !(m[0][0] * m[1][1] - m[0][1] * m[1][0]).is_square() {
                failures.push("IV: det of the last block is not a square".into());
            }
        }
    }
    Ok(Outcome::from_failures(failures, format!("{} blocks per flip", cfg.n)))
}

fn orthogonal_type_consistency(cfg: &Config) -> Result<Outcome> {
    let classes = cfg.semilinear_classes();
    if classes.is_empty() {
        return Ok(Outcome::skipped("needs a semilinear class"));
    }
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for class in classes {
        let flip = cfg.flip(class)?;
        let from_gram = stabilizer::orthogonal_type_from_gram(&flip)?;
        let predicted = predicted_group(&flip).family;
        if from_gram != predicted {
            failures.push(format!("{class}: Gram basis gives {from_gram}, table gives {predicted}"));
        }
        notes.push(format!("{class}: {predicted}"));
    }
    Ok(Outcome::from_failures(failures, notes.join(", ")))
}

fn stabilizer_block_form(cfg: &Config) -> Result<Outcome> {
    let classes: Vec<FlipClass> = cfg.classes().into_iter().filter(|c| c.is_linear()).collect();
    if classes.is_empty() {
        return Ok(Outcome::skipped("needs a linear class"));
    }
    let mut rng = cfg.rng(10);
    let mut failures = Vec::new();
    let n = cfg.n;
    for class in classes {
        let flip = cfg.flip(class)?;
        let k = flip.space().field();
        let basis = stabilizer::block_basis(&flip);
        if class == FlipClass::I {
            let two = k.elem(2, 0);
            let mut beta = Matrix::scalar(two, 2 * n);
            for i in n..2 * n {
                beta.set(i, i, -two);
            }
            if flip.space().form().gram_of(&basis) != beta
                || flip.form().gram_of(&basis) != Matrix::scalar(two, 2 * n)
            {
                failures.push("I: eigenbasis Gram matrices are not diag(2I, ∓2I)".into());
            }
        }
        let zero = Matrix::zeros(k, n, n);
        for _ in 0..20 {
            let c = random::chamber(&flip, Variant::Full, &mut rng)?;
            let d = random::chamber(&flip, Variant::Full, &mut rng)?;
            let t = stabilizer::transporter(&flip, &c, &d, Variant::Full)?;
            let [a, b, cc, dd] = stabilizer::blocks(&stabilizer::in_basis(&t, &basis)?);
            if b != zero || cc != zero {
                failures.push(format!("{class}: off-diagonal blocks do not vanish"));
            }
            if class == FlipClass::II && !a.frobenius().transpose().mul(&dd).is_identity() {
                failures.push("II: σ(Aᵗ)D ≠ I".into());
            }
            if class == FlipClass::I {
                let unitary = |m: &Matrix| m.mul(&m.frobenius().transpose()).is_identity();
                if !unitary(&a) || !unitary(&dd) {
                    failures.push("I: diagonal blocks are not unitary".into());
                }
            }
        }
    }
    Ok(Outcome::from_failures(failures, "20 transporters per linear class".into()))
}

// ---- transitivity ----

fn transitivity_variants(class: FlipClass) -> Vec<Variant> {
    if class.is_linear() {
        vec![Variant::Full]
    } else {
        vec![Variant::Plus, Variant::Minus]
    }
}

fn flag_transitivity(cfg: &Config) -> Result<Outcome> {
    let mut rng = cfg.rng(11);
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for class in cfg.classes() {
        let flip = cfg.flip(class)?;
        for variant in transitivity_variants(class) {
            let pairs: Vec<(Chamber, Chamber)> = if cfg.n == 1 {
                if variant == Variant::Minus {
                    continue;
                }
                let geom = build_geometry(&flip, variant, cfg.limit)?;
                let chambers: Vec<Chamber> = geom
                    .points()
                    .iter()
                    .map(|p| Chamber::new(flip.space(), vec![p.sub.clone()]))
                    .collect::<Result<_>>()?;
                chambers
                    .iter()
                    .flat_map(|c| chambers.iter().map(move |d| (c.clone(), d.clone())))
                    .collect()
            } else {
                (0..cfg.pairs)
                    .map(|_| Ok((random::chamber(&flip, variant, &mut rng)?, random::chamber(&flip, variant, &mut rng)?)))
                    .collect::<Result<_>>()?
            };
            let bad: Vec<String> = pairs
                .par_iter()
                .filter_map(|(c, d)| {
                    let ok = stabilizer::transporter(&flip, c, d, variant)
                        .and_then(|t| stabilizer::verify_transporter(&flip, &t, c, d));
                    match ok {
                        Ok(true) => None,
                        Ok(false) => Some(format!("{class}: transporter fails verification")),
                        Err(e) => Some(format!("{class}: {e}")),
                    }
                })
                .collect();
            failures.extend(bad);
            notes.push(format!("{class}/{variant}: {}", pairs.len()));
        }
    }
    let how = if cfg.n == 1 { "all ordered pairs" } else { "random pairs" };
    Ok(Outcome::from_failures(failures, format!("{how}: {}", notes.join(", "))))
}

fn transporter_closure(cfg: &Config) -> Result<Outcome> {
    let mut rng = cfg.rng(12);
    let mut failures = Vec::new();
    for class in cfg.classes() {
        let flip = cfg.flip(class)?;
        let variant = transitivity_variants(class)[0];
        let mut ts = Vec::new();
        for _ in 0..10 {
            let c = random::chamber(&flip, variant, &mut rng)?;
            let d = random::chamber(&flip, variant, &mut rng)?;
            ts.push(stabilizer::transporter(&flip, &c, &d, variant)?);
        }
        for _ in 0..20 {
            let a = &ts[rng.gen_range(0..ts.len())];
            let b = &ts[rng.gen_range(0..ts.len())];
            if !stabilizer::in_stabilizer(&flip, &a.mul(b))? || !stabilizer::in_stabilizer(&flip, &a.inverse()?)? {
                failures.push(format!("{class}: products or inverses leave the stabilizer"));
            }
        }
    }
    Ok(Outcome::from_failures(failures, "20 products and inverses per class".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 1, 3), 820);
        assert_eq!(gaussian_binomial(4, 2, 3), 7462);
        assert_eq!(gaussian_binomial(2, 1, 3), 10);
    }

    #[test]
    fn suites_partition_the_checks() {
        let all: Vec<&str> = checks(Suite::All).into_iter().map(|(n, _)| n).collect();
        let mut parts: Vec<&str> =
            Suite::PARTS.iter().flat_map(|s| checks(*s)).map(|(n, _)| n).collect();
        assert_eq!(all, parts);
        parts.sort();
        parts.dedup();
        assert_eq!(parts.len(), all.len());
    }

    #[test]
    fn rank_one_suite_passes() {
        let mut cfg = Config::new(1, 3);
        cfg.pairs = 10;
        cfg.conjugates = 10;
        cfg.nested = 10;
        let report = run_suite(Suite::All, &cfg);
        for c in &report.checks {
            assert_ne!(c.status, Status::Fail, "{}: {}", c.name, c.detail);
        }
        assert_eq!(report, run_suite(Suite::All, &cfg));
    }
}
