//! Named finite groups with permutation generators and direct-factor decompositions.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finitegrp::{finite_presentation, iso_signature, FiniteGroup, IsoSignature, Perm};
use crate::presentation::GroupPresentation;

const BUILTIN: &str = include_str!("../data/catalog.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub degree: usize,
    /// One-line images, 1-based.
    pub gens: Vec<Perm>,
    /// Directly indecomposable factors; `[name]` for an indecomposable group.
    pub factors: Vec<String>,
}

#[derive(Default)]
struct Cache {
    groups: HashMap<String, Arc<FiniteGroup>>,
    presentations: HashMap<String, Arc<GroupPresentation>>,
    signatures: HashMap<String, IsoSignature>,
}

pub struct Catalog {
    entries: BTreeMap<String, CatalogEntry>,
    cache: Mutex<Cache>,
}

impl Clone for Catalog {
    fn clone(&self) -> Self {
        Catalog::from_entries(self.entries.values().cloned().collect())
            .expect("entries were already validated")
    }
}

impl std::fmt::Debug for Catalog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("builtin catalog is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<CatalogEntry> = serde_json::from_str(text)?;
        Self::from_entries(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn from_entries(entries: Vec<CatalogEntry>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for e in entries {
            if e.gens.iter().any(|g| g.degree() != e.degree) {
                return Err(Error::InvalidPermutation(format!(
                    "generator of `{}` has the wrong degree",
                    e.name
                )));
            }
            map.insert(e.name.clone(), e);
        }
        for e in map.values() {
            for f in &e.factors {
                if !map.contains_key(f) {
                    return Err(Error::UnknownGroup(f.clone()));
                }
            }
        }
        Ok(Catalog {
            entries: map,
            cache: Mutex::new(Cache::default()),
        })
    }

    /// The builtin entries overridden and extended by `extra`.
    pub fn extended(&self, extra: Vec<CatalogEntry>) -> Result<Self> {
        let mut all: Vec<CatalogEntry> = self.entries.values().cloned().collect();
        all.extend(extra);
        Self::from_entries(all)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|s| s.as_str())
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn group(&self, name: &str) -> Result<Arc<FiniteGroup>> {
        if let Some(g) = self.cache.lock().unwrap().groups.get(name) {
            return Ok(g.clone());
        }
        let e = self.entry(name)?;
        let g = Arc::new(FiniteGroup::generate(
            e.degree,
            &e.gens,
            crate::finitegrp::DEFAULT_ORDER_BOUND,
        )?);
        self.cache
            .lock()
            .unwrap()
            .groups
            .insert(name.to_string(), g.clone());
        Ok(g)
    }

    /// A presentation on generators `x0, x1, …` matching the stored permutations.
    pub fn presentation(&self, name: &str) -> Result<Arc<GroupPresentation>> {
        if let Some(p) = self.cache.lock().unwrap().presentations.get(name) {
            return Ok(p.clone());
        }
        let g = self.group(name)?;
        let names = (0..g.generator_perms().len())
            .map(|i| format!("x{i}"))
            .collect();
        let p = Arc::new(finite_presentation(&g, names)?);
        self.cache
            .lock()
            .unwrap()
            .presentations
            .insert(name.to_string(), p.clone());
        Ok(p)
    }

    pub fn signature(&self, name: &str) -> Result<IsoSignature> {
        if let Some(s) = self.cache.lock().unwrap().signatures.get(name) {
            return Ok(s.clone());
        }
        let s = iso_signature(&*self.group(name)?)?;
        self.cache
            .lock()
            .unwrap()
            .signatures
            .insert(name.to_string(), s.clone());
        Ok(s)
    }

    pub fn factors(&self, name: &str) -> Result<&[String]> {
        Ok(&self.entry(name)?.factors)
    }

    pub fn is_indecomposable(&self, name: &str) -> Result<bool> {
        Ok(self.factors(name)? == [name.to_string()])
    }

    /// Catalog names whose group has the given signature, in name order.
    pub fn names_with_signature(&self, sig: &IsoSignature) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for n in self.entries.keys() {
            if self.signature(n)? == *sig {
                out.push(n.clone());
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitegrp::coset_enumerate;

    #[test]
    fn builtin_orders() {
        let c = Catalog::builtin();
        for (n, o) in [
            ("1", 1),
            ("C2", 2),
            ("C6", 6),
            ("C2xC2", 4),
            ("S3", 6),
            ("D4", 8),
            ("Q8", 8),
            ("D6", 12),
            ("A4", 12),
            ("S4", 24),
            ("A5", 60),
        ] {
            assert_eq!(c.group(n).unwrap().order(), o, "{n}");
        }
    }

    #[test]
    fn factor_orders_multiply() {
        let c = Catalog::builtin();
        for n in c.names() {
            let prod: usize = c
                .factors(n)
                .unwrap()
                .iter()
                .map(|f| c.group(f).unwrap().order())
                .product();
            assert_eq!(prod, c.group(n).unwrap().order(), "{n}");
        }
    }

    #[test]
    fn presentations_enumerate_to_the_right_order() {
        let c = Catalog::builtin();
        for n in ["C2", "C6", "S3", "Q8", "D6", "S4"] {
            let p = c.presentation(n).unwrap();
            let t = coset_enumerate(&p, &[], 50_000).unwrap();
            assert_eq!(t.index(), c.group(n).unwrap().order(), "{n}");
        }
    }

    #[test]
    fn unknown_names_are_reported() {
        let c = Catalog::builtin();
        assert_eq!(c.group("Z9").unwrap_err(), Error::UnknownGroup("Z9".into()));
        let bad = r#"[{"name":"X","degree":2,"gens":[[2,1]],"factors":["Y"]}]"#;
        assert!(Catalog::from_json(bad).is_err());
    }
}
