//! Finite labeled state spaces.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// An ordered finite vertex set with distinct labels.
///
/// The index <-> label bijection is fixed at construction and stable for the
/// lifetime of the space. Spaces are shared by `Arc` so that fields,
/// generators and operators can cheaply assert they talk about the same
/// vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Arc<Vec<String>>,
    index: Arc<HashMap<String, usize>>,
}

impl FiniteSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Other("a finite space needs at least one vertex".into()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Other(format!("duplicate vertex label {l:?}")));
            }
        }
        Ok(FiniteSpace { labels: Arc::new(labels), index: Arc::new(index) })
    }

    /// Vertices `0..n` labeled by their decimal index.
    pub fn indexed(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string())).expect("indexed labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::Other(format!("unknown vertex label {label:?}")))
    }

    /// Cheap identity check used by every cross-type operation.
    pub fn same_as(&self, other: &FiniteSpace) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }

    pub fn check_same(&self, other: &FiniteSpace, what: &str) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!("{what}: {:?} vs {:?}", self.labels, other.labels)))
        }
    }
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSpace({:?})", self.labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_distinct() {
        assert!(FiniteSpace::new(["a", "b", "a"]).is_err());
        assert!(FiniteSpace::new(Vec::<String>::new()).is_err());
        let s = FiniteSpace::new(["x", "y"]).unwrap();
        assert_eq!(s.index_of("y"), Some(1));
        assert_eq!(s.label(0), "x");
    }

    #[test]
    fn singleton_is_allowed() {
        let s = FiniteSpace::indexed(1);
        assert_eq!(s.len(), 1);
    }
}
