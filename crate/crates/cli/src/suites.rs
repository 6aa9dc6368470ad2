//! Corpus verification suites.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use grpgeo::coordinate::theorem1_crosscheck;
use grpgeo::structure::{
    csa_implies_ct_check, csnk_implies_ntk_check, is_conjugately_separated, is_domain, monolith,
    theorem2_check, theorem3_check, DomainMethod, Lattice, SubgroupClass,
};
use grpgeo::word::{EquationSystem, Letter, Word, WordCaps};
use grpgeo::zariski::{Point, PointSet, Space};
use grpgeo::{Elem, FiniteGroup, Limits, Mode};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::Subject;
use crate::error::CliError;
use crate::render::{point_labels, set_labels};
use crate::report::{disagreement, Report, SubjectReport, VerdictRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    DomainEquivalence,
    Theorem1,
    Theorem2(usize),
    Theorem3,
    CsaCt,
    CsnkNtk(usize),
    ZariskiLaws,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Suite::DomainEquivalence => f.write_str("domain-equivalence"),
            Suite::Theorem1 => f.write_str("theorem1"),
            Suite::Theorem2(k) => write!(f, "theorem2:{k}"),
            Suite::Theorem3 => f.write_str("theorem3"),
            Suite::CsaCt => f.write_str("csa-ct"),
            Suite::CsnkNtk(k) => write!(f, "csnk-ntk:{k}"),
            Suite::ZariskiLaws => f.write_str("zariski-laws"),
        }
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        let k = |t: &str| match t.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(format!("bad class parameter in suite {s:?}")),
        };
        match s.split_once(':') {
            None => match s {
                "domain-equivalence" => Ok(Suite::DomainEquivalence),
                "theorem1" => Ok(Suite::Theorem1),
                "theorem3" => Ok(Suite::Theorem3),
                "csa-ct" => Ok(Suite::CsaCt),
                "zariski-laws" => Ok(Suite::ZariskiLaws),
                "theorem2" | "csnk-ntk" => Err(format!("suite {s:?} needs a class, e.g. {s}:1")),
                _ => Err(format!("unknown suite {s:?}")),
            },
            Some(("theorem2", t)) => Ok(Suite::Theorem2(k(t)?)),
            Some(("csnk-ntk", t)) => Ok(Suite::CsnkNtk(k(t)?)),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub limits: Limits,
    pub seed: u64,
    /// Randomized closure-law cases per subject and mode.
    pub zariski_cases: usize,
    /// Largest group order the randomized Zariski laws run on.
    pub zariski_max_order: usize,
    /// Two-point sets sampled per domain in the theorem1 suite.
    pub theorem1_pairs: usize,
    /// Pairs of algebraic sets sampled per domain in the union law.
    pub union_samples: usize,
    /// Record elapsed microseconds per verdict (breaks byte-identical output).
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            limits: Limits::default(),
            seed: 2024,
            zariski_cases: 8,
            zariski_max_order: 8,
            theorem1_pairs: 20,
            union_samples: 50,
            timing: false,
        }
    }
}

impl SuiteConfig {
    /// A generator that depends only on the seed and the subject, so that
    /// results do not depend on scheduling.
    fn rng(&self, id: &str, salt: &str) -> ChaCha8Rng {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in id.bytes().chain([0]).chain(salt.bytes()) {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(self.seed ^ h)
    }
}

pub fn run_suites(
    subjects: &[Subject],
    suites: &[Suite],
    cfg: &SuiteConfig,
    extra_config: Value,
) -> Report {
    let reports: Vec<SubjectReport> = subjects
        .par_iter()
        .map(|s| SubjectReport {
            id: s.id.clone(),
            order: s.group.order(),
            verdicts: suites
                .iter()
                .flat_map(|&suite| run_one(s, suite, cfg))
                .collect(),
        })
        .collect();
    let mut config = json!({ "suites": suites, "suite": cfg });
    if let (Value::Object(c), Value::Object(extra)) = (&mut config, extra_config) {
        c.extend(extra);
    }
    Report::new(config, reports)
}

fn timed(cfg: &SuiteConfig, f: impl FnOnce() -> Vec<VerdictRecord>) -> Vec<VerdictRecord> {
    let start = Instant::now();
    let mut out = f();
    if cfg.timing {
        let micros = start.elapsed().as_micros() as u64;
        for v in &mut out {
            v.micros = micros;
        }
    }
    out
}

fn run_one(s: &Subject, suite: Suite, cfg: &SuiteConfig) -> Vec<VerdictRecord> {
    timed(cfg, || {
        let name = suite.to_string();
        let result = match suite {
            Suite::DomainEquivalence => domain_equivalence(&s.group),
            Suite::Theorem1 => theorem1(s, cfg),
            Suite::Theorem2(k) => with_lattice(&s.group, cfg, |lat| {
                Ok(vec![VerdictRecord::from_verdict(&theorem2_check(lat, k)?)])
            }),
            Suite::Theorem3 => with_lattice(&s.group, cfg, |lat| {
                Ok(vec![VerdictRecord::from_verdict(&theorem3_check(lat)?)])
            }),
            Suite::CsaCt => with_lattice(&s.group, cfg, |lat| Ok(csa_ct(lat))),
            Suite::CsnkNtk(k) => with_lattice(&s.group, cfg, |lat| {
                let v = csnk_implies_ntk_check(lat, k);
                let mut rec = VerdictRecord::from_verdict(&v);
                if !v.witnesses_revalidate(lat.group()) {
                    rec.holds = Some(false);
                    rec.witnesses
                        .push(disagreement("witness does not re-validate"));
                }
                Ok(vec![rec])
            }),
            Suite::ZariskiLaws => zariski_laws(s, cfg),
        };
        match result {
            Ok(v) => v,
            Err(e) => {
                let code = e.exit_code();
                if code == crate::error::EXIT_BUDGET {
                    vec![VerdictRecord::skipped(&name, e.to_string())]
                } else {
                    let mut rec = VerdictRecord::new(&name, false);
                    rec.witnesses.push(disagreement(e.to_string()));
                    vec![rec]
                }
            }
        }
    })
}

fn with_lattice(
    g: &FiniteGroup,
    cfg: &SuiteConfig,
    f: impl FnOnce(&Lattice<'_>) -> Result<Vec<VerdictRecord>, grpgeo::Error>,
) -> Result<Vec<VerdictRecord>, CliError> {
    let lat = Lattice::new(g, &cfg.limits)?;
    Ok(f(&lat)?)
}

/// Straight from the definition: some `x, y ≠ 1` with `y` commuting with
/// every conjugate of `x`.
pub fn brute_force_domain(g: &FiniteGroup) -> bool {
    !g.non_identity().any(|x| {
        g.non_identity()
            .any(|y| g.elements().all(|h| g.commute(g.conj(x, h), y)))
    })
}

fn domain_equivalence(g: &FiniteGroup) -> Result<Vec<VerdictRecord>, CliError> {
    let oracle = brute_force_domain(g);
    let rec = match is_domain(g, DomainMethod::All) {
        Ok(v) => {
            let mut rec = VerdictRecord::from_verdict(&v);
            rec.property = "domain-equivalence".into();
            rec.params.clear();
            let revalidated = v.witnesses_revalidate(g);
            rec.holds = Some(v.holds == oracle && revalidated);
            if v.holds != oracle {
                rec.witnesses.push(disagreement(format!(
                    "routes say {}, brute force says {oracle}",
                    v.holds
                )));
            }
            if !revalidated {
                rec.witnesses
                    .push(disagreement("a route witness does not re-validate"));
            }
            rec.details(json!({
                "domain": v.holds,
                "brute-force": oracle,
                "monolith-order": monolith(g).map(|m| m.order()),
            }))
        }
        Err(grpgeo::Error::CharacterizationDisagreement(msg)) => {
            let mut rec = VerdictRecord::new("domain-equivalence", false);
            rec.witnesses.push(disagreement(msg));
            rec
        }
        Err(e) => return Err(e.into()),
    };
    Ok(vec![rec])
}

fn csa_ct(lat: &Lattice<'_>) -> Vec<VerdictRecord> {
    let implication = VerdictRecord::from_verdict(&csa_implies_ct_check(lat));
    let csa = is_conjugately_separated(lat, SubgroupClass::Abelian);
    let csn1 = is_conjugately_separated(lat, SubgroupClass::NilpotentClass(1));
    let mut same = VerdictRecord::new("csa-csn1", csa.holds == csn1.holds)
        .details(json!({ "csa": csa.holds, "csn1": csn1.holds }));
    if csa.holds != csn1.holds {
        same.witnesses
            .push(disagreement("CSA and CSN_1 verdicts differ"));
    }
    vec![implication, same]
}

fn theorem1(s: &Subject, cfg: &SuiteConfig) -> Result<Vec<VerdictRecord>, CliError> {
    let g = &s.group;
    if !is_domain(g, DomainMethod::ZeroDivisor)?.holds {
        return Ok(vec![
            VerdictRecord::skipped("theorem1", "not a domain").param("n", 1)
        ]);
    }
    let space = Space::new(g, 1, Mode::Coefficient, cfg.limits);
    let points = space.all_points()?;
    let mut sets: Vec<PointSet> = points.iter().map(|p| PointSet::from([p.clone()])).collect();
    let mut pairs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (i + 1..points.len()).map(move |j| (i, j)))
        .collect();
    pairs.shuffle(&mut cfg.rng(&s.id, "theorem1"));
    pairs.truncate(cfg.theorem1_pairs);
    pairs.sort();
    sets.extend(
        pairs
            .into_iter()
            .map(|(i, j)| PointSet::from([points[i].clone(), points[j].clone()])),
    );
    let mut matrix: BTreeMap<String, usize> = BTreeMap::new();
    let mut witnesses = Vec::new();
    for y in &sets {
        let r = theorem1_crosscheck(&space, y)?;
        let key = format!(
            "irreducible={},g-domain={},embeds={}",
            r.irreducible,
            r.gamma_g_domain,
            r.embedding_point.is_some()
        );
        *matrix.entry(key).or_default() += 1;
        if !r.agree {
            witnesses.push(json!({
                "kind": "theorem1-disagreement",
                "points": set_labels(g, y),
                "carrier-order": r.carrier_order,
                "irreducible": r.irreducible,
                "g-domain": r.gamma_g_domain,
                "embedding-point": r.embedding_point.as_ref().map(|p| point_labels(g, p)),
            }));
        }
    }
    let mut rec = VerdictRecord::new("theorem1", witnesses.is_empty())
        .param("n", 1)
        .details(json!({
            "cases": sets.len(),
            "matrix": matrix,
        }));
    rec.witnesses = witnesses;
    rec.notes = vec![
        grpgeo::coordinate::NOETHERIAN_NOTE.to_string(),
        grpgeo::coordinate::RESIDUAL_NOTE.to_string(),
    ];
    Ok(vec![rec])
}

fn random_subset(rng: &mut impl Rng, all: &[Point], lo: usize, hi: usize) -> PointSet {
    let k = rng.gen_range(lo..=hi.min(all.len()).max(lo));
    all.choose_multiple(rng, k).cloned().collect()
}

fn random_word(rng: &mut impl Rng, g: &FiniteGroup, n: usize, mode: Mode) -> Word {
    let len = rng.gen_range(1..=4);
    let letters: Vec<Letter> = (0..len)
        .map(|_| {
            if mode.allows_constants() && rng.gen_bool(0.4) {
                Letter::Const(Elem(rng.gen_range(0..g.order() as u32)))
            } else {
                let e = rng.gen_range(1..=3i64);
                Letter::var(rng.gen_range(0..n), if rng.gen_bool(0.5) { e } else { -e })
            }
        })
        .collect();
    Word::from_letters(Some(g), n, mode, letters).expect("letters are in range")
}

fn random_system(rng: &mut impl Rng, g: &FiniteGroup, n: usize, mode: Mode) -> EquationSystem {
    let words = (0..rng.gen_range(1..=2))
        .map(|_| random_word(rng, g, n, mode))
        .collect();
    EquationSystem::new(n, mode, words).expect("compatible words")
}

struct LawTally {
    counts: BTreeMap<&'static str, usize>,
    failures: Vec<Value>,
}

impl LawTally {
    fn new() -> Self {
        LawTally {
            counts: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, law: &'static str, ok: bool, detail: impl FnOnce() -> Value) {
        *self.counts.entry(law).or_default() += 1;
        if !ok {
            let mut d = detail();
            d["law"] = json!(law);
            d["kind"] = json!("law-violation");
            self.failures.push(d);
        }
    }

    fn into_record(self, property: &str, cases: usize) -> VerdictRecord {
        let mut rec = VerdictRecord::new(property, self.failures.is_empty())
            .details(json!({ "cases": cases, "checks": self.counts }));
        rec.witnesses = self.failures;
        rec
    }
}

fn closure_laws(s: &Subject, cfg: &SuiteConfig) -> Result<VerdictRecord, CliError> {
    let g = &s.group;
    let mut rng = cfg.rng(&s.id, "closure-laws");
    let mut tally = LawTally::new();
    let mut cases = 0;
    for mode in [Mode::Coefficient, Mode::CoefficientFree] {
        for case in 0..cfg.zariski_cases {
            let n = 1 + case % 2;
            let space = Space::new(g, n, mode, cfg.limits);
            let all = space.all_points()?;
            let u1 = random_subset(&mut rng, &all, 1, 3);
            let mut u2 = u1.clone();
            u2.extend(random_subset(&mut rng, &all, 0, 1));
            let c1 = space.algebraic_closure(&u1)?;
            let c2 = space.algebraic_closure(&u2)?;
            let labels =
                |u: &PointSet| json!({ "mode": mode.to_string(), "n": n, "set": set_labels(g, u) });
            tally.check("extensive", c1.is_superset(&u1), || labels(&u1));
            tally.check("monotone", c2.is_superset(&c1), || labels(&u2));
            let wide = Space::new(
                g,
                n,
                mode,
                Limits {
                    max_width: 64,
                    ..cfg.limits
                },
            );
            tally.check("idempotent", wide.algebraic_closure(&c1)? == c1, || {
                labels(&u1)
            });
            tally.check(
                "pointwise-route",
                space.algebraic_closure_pointwise(&u1)? == c1,
                || labels(&u1),
            );
            if mode == Mode::Coefficient {
                tally.check("discrete", space.topological_closure(&u1)? == u1, || {
                    labels(&u1)
                });
            }
            let s1 = random_system(&mut rng, g, n, mode);
            let s2 = random_system(&mut rng, g, n, mode);
            let v1 = space.solution_set(&s1)?.points;
            let v2 = space.solution_set(&s2)?.points;
            let v12 = space.solution_set(&s1.union(&s2)?)?.points;
            tally.check(
                "union-of-systems",
                v12 == v1.intersection(&v2).cloned().collect(),
                || json!({ "mode": mode.to_string(), "n": n }),
            );
            cases += 1;
        }
    }
    Ok(tally.into_record("zariski-laws", cases))
}

/// All sets of at most four points in `G^1`, closed ones only.
fn irreducibility_oracle(s: &Subject, cfg: &SuiteConfig) -> Result<VerdictRecord, CliError> {
    let g = &s.group;
    let mut tally = LawTally::new();
    let mut cases = 0;
    for mode in [Mode::Coefficient, Mode::CoefficientFree] {
        let space = Space::new(g, 1, mode, cfg.limits);
        let all = space.all_points()?;
        for mask in 1u64..(1u64 << all.len()) {
            if mask.count_ones() > 4 {
                continue;
            }
            let y: PointSet = (0..all.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all[i].clone())
                .collect();
            if !space.is_algebraic(&y)? {
                continue;
            }
            cases += 1;
            let generic = space.is_irreducible(&y)?;
            let covered = space.reducibility_oracle(&y)?;
            let comps = space.irreducible_components(&y)?;
            let union: PointSet = comps.iter().flatten().cloned().collect();
            let detail = || json!({ "mode": mode.to_string(), "set": set_labels(g, &y) });
            tally.check("generic-point-vs-cover", generic != covered, detail);
            tally.check("components-cover", union == y, detail);
            tally.check(
                "components-single-when-irreducible",
                generic == (comps.len() == 1),
                detail,
            );
        }
    }
    Ok(tally.into_record("irreducibility-oracle", cases))
}

/// Bounded word closures shrink towards the exact closure as caps grow.
fn word_oracle(s: &Subject, cfg: &SuiteConfig) -> Result<VerdictRecord, CliError> {
    let g = &s.group;
    let mut rng = cfg.rng(&s.id, "word-oracle");
    let mut tally = LawTally::new();
    let mut cases = 0;
    for mode in [Mode::Coefficient, Mode::CoefficientFree] {
        let space = Space::new(g, 1, mode, cfg.limits);
        let all = space.all_points()?;
        for _ in 0..cfg.zariski_cases {
            let u = random_subset(&mut rng, &all, 1, 2);
            let exact = space.algebraic_closure(&u)?;
            let mut prev: Option<PointSet> = None;
            let mut shrinking = true;
            for letters in 0..=4 {
                let caps = WordCaps {
                    max_letters: letters,
                    max_abs_exponent: g.order() as u32,
                };
                let approx = space.bounded_word_closure(&u, caps)?;
                shrinking &= approx.is_superset(&exact)
                    && prev.as_ref().is_none_or(|p| p.is_superset(&approx));
                prev = Some(approx);
            }
            let detail = || json!({ "mode": mode.to_string(), "set": set_labels(g, &u) });
            tally.check("upper-bound", shrinking, detail);
            tally.check("converges", prev.as_ref() == Some(&exact), detail);
            cases += 1;
        }
    }
    Ok(tally.into_record("word-oracle", cases))
}

/// Domains: unions of sampled algebraic sets stay algebraic. Non-trivial
/// abelian groups: a pair whose union is not algebraic is exhibited.
fn union_law(s: &Subject, cfg: &SuiteConfig) -> Result<Option<VerdictRecord>, CliError> {
    let g = &s.group;
    let domain = is_domain(g, DomainMethod::ZeroDivisor)?.holds;
    if domain {
        let space = Space::new(g, 1, Mode::Coefficient, cfg.limits);
        let all = space.all_points()?;
        let mut rng = cfg.rng(&s.id, "union-law");
        let mut tally = LawTally::new();
        for _ in 0..cfg.union_samples {
            let y1 = space.algebraic_closure(&random_subset(&mut rng, &all, 1, 2))?;
            let y2 = space.algebraic_closure(&random_subset(&mut rng, &all, 1, 2))?;
            let ok = space.union_is_algebraic(&y1, &y2)?;
            tally.check(
                "union-algebraic",
                ok,
                || json!({ "first": set_labels(g, &y1), "second": set_labels(g, &y2) }),
            );
        }
        let rec = tally
            .into_record("union-law", cfg.union_samples)
            .param("n", 1);
        return Ok(Some(rec));
    }
    if !g.is_abelian() || g.is_trivial() {
        return Ok(None);
    }
    for n in 1..=2 {
        let space = Space::new(g, n, Mode::Coefficient, cfg.limits);
        let all = space.all_points()?;
        // singletons first, then closures of pairs
        let mut closed: Vec<PointSet> = all.iter().map(|p| PointSet::from([p.clone()])).collect();
        for (i, p) in all.iter().enumerate() {
            for q in &all[i + 1..] {
                let c = space.algebraic_closure(&PointSet::from([p.clone(), q.clone()]))?;
                if c.len() < all.len() && !closed.contains(&c) {
                    closed.push(c);
                }
            }
        }
        for (i, y1) in closed.iter().enumerate() {
            for y2 in &closed[i + 1..] {
                if y1.is_subset(y2) || y2.is_subset(y1) {
                    continue;
                }
                if !space.union_is_algebraic(y1, y2)? {
                    let union: PointSet = y1.union(y2).cloned().collect();
                    let closure = space.algebraic_closure(&union)?;
                    let rec = VerdictRecord::new("union-failure", true)
                        .param("n", n)
                        .details(json!({
                            "first": set_labels(g, y1),
                            "second": set_labels(g, y2),
                            "closure-size": closure.len(),
                        }));
                    return Ok(Some(rec));
                }
            }
        }
    }
    let mut rec = VerdictRecord::new("union-failure", false);
    rec.witnesses.push(disagreement(
        "abelian group without a non-algebraic union at n <= 2",
    ));
    Ok(Some(rec))
}

fn zariski_laws(s: &Subject, cfg: &SuiteConfig) -> Result<Vec<VerdictRecord>, CliError> {
    let mut out = Vec::new();
    if s.group.order() <= cfg.zariski_max_order {
        out.push(closure_laws(s, cfg)?);
        out.push(irreducibility_oracle(s, cfg)?);
        if s.group.order() <= 6 {
            out.push(word_oracle(s, cfg)?);
        }
    } else {
        out.push(VerdictRecord::skipped(
            "zariski-laws",
            format!("order above {}", cfg.zariski_max_order),
        ));
    }
    out.extend(union_law(s, cfg)?);
    Ok(out)
}
