//! Coordinate groups of finite point sets, realised inside direct powers.
//!
//! A word is sent to the tuple of its values at the points of `Y`; the image
//! of `G[X]` under this map is the carrier, and its kernel is `Rad(Y)`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Provenance};
use crate::power::{StabilizerChain, Tuple, TupleOps};
use crate::structure::{is_domain, DomainMethod};
use crate::word::{Letter, Mode, Word};
use crate::zariski::{Point, PointSet, Space};

/// Dense code tables are used up to this many slots.
const DENSE_LOOKUP: usize = 1 << 24;

enum Lookup {
    Dense(Vec<u32>),
    Sparse(HashMap<usize, u32>),
}

impl Lookup {
    fn new(slots: Option<usize>) -> Lookup {
        match slots {
            Some(s) if s <= DENSE_LOOKUP => Lookup::Dense(vec![u32::MAX; s]),
            _ => Lookup::Sparse(HashMap::new()),
        }
    }

    fn get(&self, code: usize) -> Option<u32> {
        match self {
            Lookup::Dense(v) => Some(v[code]).filter(|&i| i != u32::MAX),
            Lookup::Sparse(m) => m.get(&code).copied(),
        }
    }

    fn insert(&mut self, code: usize, idx: u32) {
        match self {
            Lookup::Dense(v) => v[code] = idx,
            Lookup::Sparse(m) => {
                m.insert(code, idx);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoordinateGroup<'g> {
    base: &'g FiniteGroup,
    mode: Mode,
    carrier: FiniteGroup,
    tuples: Vec<Tuple>,
    /// Carrier image of the diagonal copy of every element of `G`
    /// (coefficient mode only).
    const_embedding: Option<Vec<Elem>>,
    var_images: Vec<Elem>,
    point_order: Vec<Point>,
}

impl<'g> CoordinateGroup<'g> {
    pub fn new(space: &Space<'g>, y: &PointSet) -> Result<CoordinateGroup<'g>> {
        let g = space.group();
        let limits = space.limits();
        if y.is_empty() {
            return Err(Error::EmptySet);
        }
        limits.check_width(y.len())?;
        if let Some(p) = y.iter().find(|p| p.len() != space.n_vars()) {
            return Err(Error::BadParameter(format!(
                "point {p:?} does not have {} coordinates",
                space.n_vars()
            )));
        }
        let m = y.len();
        let point_order: Vec<Point> = y.iter().cloned().collect();
        let ops = TupleOps::new(g, m);
        let mode = space.mode();
        let diag: Vec<Tuple> = if mode.allows_constants() {
            g.generating_set().iter().map(|x| vec![x.0; m]).collect()
        } else {
            Vec::new()
        };
        let vars: Vec<Tuple> = (0..space.n_vars())
            .map(|v| point_order.iter().map(|p| p[v].0).collect())
            .collect();
        let gens: Vec<Tuple> = diag.iter().chain(&vars).cloned().collect();

        let budget = limits.budget();
        let chain = StabilizerChain::build(g, m, m, &gens, &budget)?;
        let order = chain
            .base_order()
            .filter(|&o| o.saturating_mul(o) <= limits.budget as u128)
            .ok_or(Error::BudgetExceeded {
                limit: limits.budget,
            })? as usize;

        let slots = g.order().checked_pow(m as u32);
        let mut lookup = Lookup::new(slots);
        let mut tuples: Vec<Tuple> = vec![ops.identity()];
        lookup.insert(0, 0);
        let mut k = 0;
        while k < tuples.len() {
            for s in &gens {
                let t = ops.mul(&tuples[k], s);
                let code = ops.code(&t);
                if lookup.get(code).is_none() {
                    lookup.insert(code, tuples.len() as u32);
                    tuples.push(t);
                }
            }
            k += 1;
        }
        debug_assert_eq!(tuples.len(), order);

        let n = g.order();
        let table = g.raw_mul();
        let mut mul = Vec::with_capacity(order * order);
        for a in &tuples {
            for b in &tuples {
                let code = a.iter().zip(b).rev().fold(0usize, |acc, (&x, &y)| {
                    acc * n + table[x as usize * n + y as usize] as usize
                });
                mul.push(lookup.get(code).expect("carrier is closed"));
            }
        }
        let labels: Vec<String> = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().map(|&x| g.label(Elem(x))).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let carrier = FiniteGroup::from_parts(
            mul,
            labels,
            Provenance::DirectPowerSubgroup {
                base: g.provenance().to_string(),
                width: m,
            },
        )?;
        let find = |t: &[u32]| Elem(lookup.get(ops.code(t)).expect("generator lies in carrier"));
        let const_embedding = mode
            .allows_constants()
            .then(|| g.elements().map(|x| find(&vec![x.0; m])).collect());
        let var_images = vars.iter().map(|t| find(t)).collect();
        Ok(CoordinateGroup {
            base: g,
            mode,
            carrier,
            tuples,
            const_embedding,
            var_images,
            point_order,
        })
    }

    pub fn base(&self) -> &'g FiniteGroup {
        self.base
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn width(&self) -> usize {
        self.point_order.len()
    }

    pub fn carrier(&self) -> &FiniteGroup {
        &self.carrier
    }

    pub fn point_order(&self) -> &[Point] {
        &self.point_order
    }

    /// The tuple of values, one per point of `Y`, represented by `x`.
    pub fn tuple(&self, x: Elem) -> Vec<Elem> {
        self.tuples[x.index()].iter().map(|&v| Elem(v)).collect()
    }

    pub fn const_image(&self, c: Elem) -> Option<Elem> {
        self.const_embedding.as_ref().map(|e| e[c.index()])
    }

    pub fn var_image(&self, v: usize) -> Elem {
        self.var_images[v]
    }

    /// Generators of the carrier with their images under evaluation at `q`.
    fn generator_images(&self, q: &[Elem]) -> Vec<(Elem, Elem)> {
        let mut out: Vec<(Elem, Elem)> = Vec::new();
        if let Some(emb) = &self.const_embedding {
            out.extend(
                self.base
                    .generating_set()
                    .into_iter()
                    .map(|g| (emb[g.index()], g)),
            );
        }
        out.extend(self.var_images.iter().zip(q).map(|(&x, &y)| (x, y)));
        out
    }

    /// The homomorphism carrier → G fixing constants and sending the
    /// variables to `q`, as a table indexed by carrier element; `None` when
    /// the assignment does not extend.
    pub fn evaluation_hom(&self, q: &[Elem]) -> Option<Vec<Elem>> {
        let gens = self.generator_images(q);
        let c = &self.carrier;
        let mut image: Vec<Option<Elem>> = vec![None; c.order()];
        image[0] = Some(Elem::IDENTITY);
        let mut queue = vec![Elem::IDENTITY];
        while let Some(x) = queue.pop() {
            let fx = image[x.index()].expect("visited");
            for &(s, fs) in &gens {
                let y = c.mul(x, s);
                let fy = self.base.mul(fx, fs);
                match image[y.index()] {
                    None => {
                        image[y.index()] = Some(fy);
                        queue.push(y);
                    }
                    Some(prev) if prev != fy => return None,
                    Some(_) => {}
                }
            }
        }
        image.into_iter().collect()
    }

    /// Image of a word in the carrier.
    pub fn fold_word(&self, w: &Word) -> Result<Elem> {
        let c = &self.carrier;
        let mut acc = Elem::IDENTITY;
        for l in w.letters() {
            let x = match *l {
                Letter::Var { var, exp } => c.pow(self.var_images[var], exp),
                Letter::Const(k) => self.const_image(k).ok_or_else(|| {
                    Error::ModeMismatch("constant in a coefficient-free coordinate group".into())
                })?,
            };
            acc = c.mul(acc, x);
        }
        Ok(acc)
    }

    /// A pair `x, y ≠ 1` of carrier elements with `[x^g, y] = 1` for every
    /// constant `g`.
    pub fn g_zero_divisor(&self) -> Result<Option<(Elem, Elem)>> {
        let emb = self
            .const_embedding
            .as_ref()
            .ok_or_else(|| Error::ModeMismatch("G-domain test needs coefficient mode".into()))?;
        let c = &self.carrier;
        let n = c.order();
        let mut cents = vec![FixedBitSet::with_capacity(n); n];
        for a in c.elements() {
            for b in c.elements().skip(a.index()) {
                if c.commute(a, b) {
                    cents[a.index()].insert(b.index());
                    cents[b.index()].insert(a.index());
                }
            }
        }
        let mut done = FixedBitSet::with_capacity(n);
        for x in c.non_identity() {
            if done.contains(x.index()) {
                continue;
            }
            let mut common = cents[x.index()].clone();
            for &g in emb {
                let xg = c.conj(x, g);
                done.insert(xg.index());
                common.intersect_with(&cents[xg.index()]);
            }
            if let Some(y) = common.ones().find(|&i| i != 0) {
                return Ok(Some((x, Elem(y as u32))));
            }
        }
        Ok(None)
    }

    pub fn is_g_domain(&self) -> Result<bool> {
        Ok(self.g_zero_divisor()?.is_none())
    }

    /// A point of the closure of `Y` whose evaluation map is injective.
    pub fn find_embedding_point(&self, space: &Space<'_>) -> Result<Option<Point>> {
        let y: PointSet = self.point_order.iter().cloned().collect();
        for q in space.algebraic_closure(&y)? {
            let hom = self.evaluation_hom(&q).ok_or_else(|| {
                Error::BadParameter(format!("closure point {q:?} does not extend"))
            })?;
            let mut seen = FixedBitSet::with_capacity(self.base.order());
            if hom.iter().all(|x| !seen.put(x.index())) {
                return Ok(Some(q));
            }
        }
        Ok(None)
    }
}

pub const NOETHERIAN_NOTE: &str =
    "equationally Noetherian holds automatically for a finite carrier";
pub const RESIDUAL_NOTE: &str =
    "fully residually G is tested as the existence of one injective G-homomorphism, exact for a finite carrier";

/// The three items compared by [`theorem1_crosscheck`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem1Report {
    pub points: Vec<Point>,
    pub carrier_order: usize,
    pub irreducible: bool,
    pub generic_point: Option<Point>,
    pub gamma_g_domain: bool,
    pub zero_divisor: Option<(Vec<Elem>, Vec<Elem>)>,
    pub embedding_point: Option<Point>,
    pub agree: bool,
    pub notes: Vec<String>,
}

/// Irreducibility of `Y`, the G-domain property of its coordinate group,
/// and embeddability of that group into `G`, side by side.
pub fn theorem1_crosscheck(space: &Space<'_>, y: &PointSet) -> Result<Theorem1Report> {
    if space.mode() != Mode::Coefficient {
        return Err(Error::ModeMismatch(
            "the crosscheck runs in coefficient mode".into(),
        ));
    }
    let g = space.group();
    let domain = is_domain(g, DomainMethod::ZeroDivisor)?;
    if !domain.holds {
        return Err(Error::NotADomain(g.provenance().to_string()));
    }
    let generic_point = space.generic_point(y)?;
    let gamma = CoordinateGroup::new(space, y)?;
    let zd = gamma.g_zero_divisor()?;
    let embedding_point = gamma.find_embedding_point(space)?;
    let items = [
        generic_point.is_some(),
        zd.is_none(),
        embedding_point.is_some(),
    ];
    Ok(Theorem1Report {
        points: gamma.point_order().to_vec(),
        carrier_order: gamma.carrier().order(),
        irreducible: items[0],
        generic_point,
        gamma_g_domain: items[1],
        zero_divisor: zd.map(|(a, b)| (gamma.tuple(a), gamma.tuple(b))),
        embedding_point,
        agree: items.iter().all(|&b| b == items[0]),
        notes: vec![NOETHERIAN_NOTE.to_string(), RESIDUAL_NOTE.to_string()],
    })
}
