//! In-memory scenario store. Readers take a snapshot without locking;
//! writers build a new map and swap it in atomically.

use std::collections::BTreeMap;
use std::sync::Arc;

use arc_swap::ArcSwap;
use ictimpact_core::workbench::{input_digest, ScenarioDocument};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct StoredScenario {
    pub id: String,
    /// Starts at 1 and increases with every replacement.
    pub revision: u64,
    pub input_sha256: String,
    #[serde(skip)]
    pub document: ScenarioDocument,
}

#[derive(Debug, PartialEq, Eq)]
pub struct StoreFull {
    pub capacity: usize,
}

type Snapshot = BTreeMap<String, Arc<StoredScenario>>;

pub struct ScenarioStore {
    snapshot: ArcSwap<Snapshot>,
    capacity: usize,
}

impl ScenarioStore {
    pub fn new(capacity: usize) -> Self {
        ScenarioStore {
            snapshot: ArcSwap::from_pointee(BTreeMap::new()),
            capacity,
        }
    }

    pub fn get(&self, id: &str) -> Option<Arc<StoredScenario>> {
        self.snapshot.load().get(id).cloned()
    }

    pub fn len(&self) -> usize {
        self.snapshot.load().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Inserts or replaces `id`. New ids are refused once the store is full.
    pub fn put(&self, id: &str, document: ScenarioDocument) -> Result<Arc<StoredScenario>, StoreFull> {
        let input_sha256 = input_digest(&document);
        loop {
            let current = self.snapshot.load_full();
            let previous = current.get(id);
            if previous.is_none() && current.len() >= self.capacity {
                return Err(StoreFull {
                    capacity: self.capacity,
                });
            }
            let entry = Arc::new(StoredScenario {
                id: id.to_string(),
                revision: previous.map_or(1, |p| p.revision + 1),
                input_sha256: input_sha256.clone(),
                document: document.clone(),
            });
            let mut next = (*current).clone();
            next.insert(id.to_string(), Arc::clone(&entry));
            let prev = self.snapshot.compare_and_swap(&current, Arc::new(next));
            if Arc::ptr_eq(&prev, &current) {
                return Ok(entry);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ictimpact_core::workbench::{parse_scenario, ParseMode};

    fn doc() -> ScenarioDocument {
        let text = include_str!("../../core/fixtures/golden_aggregate.json");
        parse_scenario(text, ParseMode::Strict).unwrap()
    }

    #[test]
    fn revisions_and_capacity() {
        let store = ScenarioStore::new(2);
        assert_eq!(store.put("a", doc()).unwrap().revision, 1);
        assert_eq!(store.put("a", doc()).unwrap().revision, 2);
        store.put("b", doc()).unwrap();
        assert_eq!(store.put("c", doc()).unwrap_err(), StoreFull { capacity: 2 });
        // replacing an existing id is still allowed when full
        assert_eq!(store.put("b", doc()).unwrap().revision, 2);
        assert_eq!(store.len(), 2);
        assert!(store.get("c").is_none());
    }

    #[test]
    fn readers_keep_their_snapshot() {
        let store = ScenarioStore::new(8);
        store.put("a", doc()).unwrap();
        let before = store.get("a").unwrap();
        store.put("a", doc()).unwrap();
        assert_eq!(before.revision, 1);
        assert_eq!(store.get("a").unwrap().revision, 2);
    }

    #[test]
    fn concurrent_writers_lose_no_update() {
        let store = Arc::new(ScenarioStore::new(64));
        let handles: Vec<_> = (0..8)
            .map(|t| {
                let store = Arc::clone(&store);
                std::thread::spawn(move || {
                    for _ in 0..20 {
                        store.put("shared", doc()).unwrap();
                        store.put(&format!("own-{t}"), doc()).unwrap();
                    }
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
        assert_eq!(store.get("shared").unwrap().revision, 160);
        assert_eq!(store.len(), 9);
    }
}
