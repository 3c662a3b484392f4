//! Process-wide memo tables for sets and sijections.
//!
//! The pipeline revisits the same bottom rows massively; memoizing the
//! constructors keeps the composition DAG shared. Values are built outside
//! the shard lock, so recursive constructors cannot deadlock; on a race the
//! first inserted value wins and everyone shares it.

use std::hash::Hash;
use std::sync::OnceLock;

use dashmap::DashMap;

pub(crate) struct Memo<K: Eq + Hash, V>(OnceLock<DashMap<K, V>>);

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    pub(crate) const fn new() -> Self {
        Memo(OnceLock::new())
    }

    pub(crate) fn get_or(&self, key: K, build: impl FnOnce() -> V) -> V {
        let map = self.0.get_or_init(DashMap::new);
        if let Some(v) = map.get(&key) {
            return v.clone();
        }
        let v = build();
        map.entry(key).or_insert(v).clone()
    }
}
