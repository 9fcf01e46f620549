use std::collections::BTreeMap;

/// Per-class population of one node, as produced by a `GROUP BY` over the
/// class column. Classes absent from the node are not listed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassHistogram {
    entries: BTreeMap<String, u64>,
    total: u64,
}

impl ClassHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `count` occurrences of `class`. Zero counts are ignored.
    pub fn add(&mut self, class: impl Into<String>, count: u64) {
        if count == 0 {
            return;
        }
        *self.entries.entry(class.into()).or_insert(0) += count;
        self.total += count;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, class: &str) -> u64 {
        self.entries.get(class).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.values().copied()
    }

    /// Counts laid out along `classes`, zero for classes not present.
    pub fn aligned(&self, classes: &[String]) -> Vec<u64> {
        classes.iter().map(|c| self.get(c)).collect()
    }

    pub fn from_aligned(classes: &[String], counts: &[u64]) -> Self {
        let mut h = Self::new();
        for (class, &n) in classes.iter().zip(counts) {
            h.add(class.clone(), n);
        }
        h
    }
}

impl<S: Into<String>> FromIterator<(S, u64)> for ClassHistogram {
    fn from_iter<I: IntoIterator<Item = (S, u64)>>(iter: I) -> Self {
        let mut h = Self::new();
        for (class, n) in iter {
            h.add(class, n);
        }
        h
    }
}
