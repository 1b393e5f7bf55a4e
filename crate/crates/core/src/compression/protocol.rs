//! Sample compression on a domain `J`: the compressor sends `r_J(labels)`
//! where `r_J` is the ccc-chain scheme of `project(C, J)`, and the
//! reconstructor inverts it knowing `J`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::class::ConceptClass;
use crate::coords::CoordSet;
use crate::error::{Error, Result};
use crate::vertex::{gather, scatter, Vertex};

use super::{build_scheme, RepresentationMap};

/// Schemes per projected domain, shared between threads.
///
/// Keys hold the full class, so a hash collision can never return the
/// scheme of a different class.
#[derive(Default)]
pub struct SchemeCache {
    schemes: RwLock<HashMap<(ConceptClass, u64), Arc<RepresentationMap>>>,
}

impl SchemeCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static SchemeCache {
        static GLOBAL: OnceLock<SchemeCache> = OnceLock::new();
        GLOBAL.get_or_init(SchemeCache::new)
    }

    pub fn len(&self) -> usize {
        self.schemes.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.schemes.write().expect("cache lock").clear();
    }

    /// `r_J` for the class, built on first use.
    pub fn scheme(&self, class: &ConceptClass, j: &CoordSet) -> Result<Arc<RepresentationMap>> {
        let projected = class.project(j)?;
        let key = (class.clone(), j.mask());
        if let Some(r) = self.schemes.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(r));
        }
        // built outside the lock; a racing builder produces the same map
        let r = Arc::new(build_scheme(&projected)?);
        let mut guard = self.schemes.write().expect("cache lock");
        Ok(Arc::clone(guard.entry(key).or_insert(r)))
    }

    pub fn compress(
        &self,
        class: &ConceptClass,
        j: &CoordSet,
        labels: &Vertex,
    ) -> Result<CoordSet> {
        check_domain(class, j, labels.dim())?;
        if j.is_empty() {
            return Ok(CoordSet::EMPTY);
        }
        let r = self.scheme(class, j)?;
        let local = r.get(labels).ok_or(Error::Unrealisable(*labels))?;
        Ok(CoordSet::from_mask(scatter(local.mask(), j.mask())))
    }

    pub fn reconstruct(
        &self,
        class: &ConceptClass,
        j: &CoordSet,
        rep: &CoordSet,
    ) -> Result<Vertex> {
        class.check_coords(j)?;
        if !rep.is_subset(j) {
            return Err(Error::NotInImage(rep.to_vec()));
        }
        if j.is_empty() {
            if class.is_empty() {
                return Err(Error::EmptyClass);
            }
            return Ok(Vertex::zero(0));
        }
        let r = self.scheme(class, j)?;
        let local = CoordSet::from_mask(gather(rep.mask(), j.mask()));
        r.invert(&local)
            .ok_or_else(|| Error::NotInImage(rep.to_vec()))
    }
}

fn check_domain(class: &ConceptClass, j: &CoordSet, labels_dim: usize) -> Result<()> {
    class.check_coords(j)?;
    if labels_dim != j.len() {
        return Err(Error::DimensionMismatch {
            left: j.len(),
            right: labels_dim,
        });
    }
    if class.is_empty() {
        return Err(Error::EmptyClass);
    }
    Ok(())
}

/// Compresses the labelling of `J` to a subset of `J`.
pub fn compress_sample(class: &ConceptClass, j: &CoordSet, labels: &Vertex) -> Result<CoordSet> {
    SchemeCache::global().compress(class, j, labels)
}

/// Recovers the labelling of `J` from its compressed form.
pub fn reconstruct(class: &ConceptClass, j: &CoordSet, rep: &CoordSet) -> Result<Vertex> {
    SchemeCache::global().reconstruct(class, j, rep)
}
