//! The groups a verification run iterates over.

use std::collections::HashSet;
use std::path::PathBuf;

use grpgeo::group::{builtin, Family};
use grpgeo::{FiniteGroup, Limits};
use serde::Serialize;

use crate::error::CliError;
use crate::files::read_group;

pub struct Subject {
    pub id: String,
    pub group: FiniteGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Commutativity {
    Any,
    Abelian,
    NonAbelian,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusSpec {
    /// Sweep the built-in families.
    pub builtin: bool,
    pub files: Vec<PathBuf>,
    pub min_order: usize,
    pub max_order: usize,
    /// Add A5 and the dihedral and dicyclic groups up to order 32.
    pub extras: bool,
    pub commutativity: Commutativity,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            builtin: true,
            files: Vec::new(),
            min_order: 1,
            max_order: 24,
            extras: true,
            commutativity: Commutativity::Any,
        }
    }
}

/// Single families of order at most `max`, products excluded.
fn base_families(max: usize) -> Vec<Family> {
    let mut out = Vec::new();
    out.extend((1..=max).map(Family::Cyclic));
    out.extend((4..=max).step_by(2).map(Family::Dihedral));
    out.extend((8..=max).step_by(4).map(Family::Dicyclic));
    // smaller symmetric and alternating groups are cyclic
    for n in 3.. {
        let f = Family::Symmetric(n);
        if f.order().is_none_or(|o| o > max) {
            break;
        }
        out.push(f);
    }
    for n in 4.. {
        let f = Family::Alternating(n);
        if f.order().is_none_or(|o| o > max) {
            break;
        }
        out.push(f);
    }
    for p in [2usize, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        for k in 2.. {
            let f = Family::ElementaryAbelian { p, k };
            if f.order().is_none_or(|o| o > max) {
                break;
            }
            out.push(f);
        }
    }
    out
}

/// The built-in families the corpus is drawn from, before deduplication.
pub fn builtin_families(max: usize, extras: bool) -> Vec<Family> {
    let base = base_families(max);
    let mut out = base.clone();
    for (i, a) in base.iter().enumerate() {
        for b in &base[i..] {
            let (oa, ob) = (a.order().unwrap_or(0), b.order().unwrap_or(0));
            if oa >= 2 && ob >= 2 && oa * ob <= max {
                out.push(Family::product(a.clone(), b.clone()));
            }
        }
    }
    if extras {
        out.push(Family::Alternating(5));
        out.extend((max + 1..=32).filter(|n| n % 2 == 0).map(Family::Dihedral));
        out.extend((max + 1..=32).filter(|n| n % 4 == 0).map(Family::Dicyclic));
    }
    out
}

impl CorpusSpec {
    /// Groups sorted by order and id, deduplicated by multiplication table.
    pub fn resolve(&self, limits: &Limits) -> Result<Vec<Subject>, CliError> {
        let mut subjects = Vec::new();
        if self.builtin {
            for f in builtin_families(self.max_order, self.extras) {
                let group = builtin(&f, limits)?;
                subjects.push(Subject {
                    id: f.to_string(),
                    group,
                });
            }
        }
        for path in &self.files {
            subjects.push(Subject {
                id: path.display().to_string(),
                group: read_group(path, limits)?,
            });
        }
        let extra_ok = |s: &Subject| self.extras && self.builtin && is_extra(&s.id);
        subjects.retain(|s| {
            let o = s.group.order();
            let in_range = (self.min_order..=self.max_order).contains(&o) || extra_ok(s);
            let comm = match self.commutativity {
                Commutativity::Any => true,
                Commutativity::Abelian => s.group.is_abelian(),
                Commutativity::NonAbelian => !s.group.is_abelian(),
            };
            in_range && comm
        });
        subjects.sort_by(|a, b| (a.group.order(), &a.id).cmp(&(b.group.order(), &b.id)));
        let mut seen = HashSet::new();
        subjects.retain(|s| seen.insert((s.group.order(), s.group.table_hash())));
        Ok(subjects)
    }
}

fn is_extra(id: &str) -> bool {
    id == "A5" || id.starts_with('D')
}
