use std::collections::BTreeSet;

use crate::error::ModelError;
use crate::fsa::{Fsa, StateId};

/// Crucial state pairs that must never be confused. Always irreflexive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Specification {
    pairs: BTreeSet<(StateId, StateId)>,
}

impl Specification {
    pub fn new<I: IntoIterator<Item = (StateId, StateId)>>(
        a: &Fsa,
        pairs: I,
    ) -> Result<Self, ModelError> {
        let mut set = BTreeSet::new();
        for (x, y) in pairs {
            if x == y {
                return Err(ModelError::ReflexivePair(a.state_name(x).to_string()));
            }
            set.insert((x, y));
        }
        Ok(Specification { pairs: set })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Every ordered pair of distinct states.
    pub fn all_distinct_pairs(a: &Fsa) -> Self {
        let pairs = a
            .states()
            .flat_map(|x| a.states().map(move |y| (x, y)))
            .filter(|(x, y)| x != y)
            .collect();
        Specification { pairs }
    }

    pub fn pairs(&self) -> &BTreeSet<(StateId, StateId)> {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Membership of the pair or its swap.
    pub fn matches(&self, x: StateId, y: StateId) -> bool {
        self.pairs.contains(&(x, y)) || self.pairs.contains(&(y, x))
    }

    /// One `x y` pair per line; `#` starts a comment.
    pub fn parse(a: &Fsa, text: &str) -> Result<Self, ModelError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let items: Vec<&str> = content.split_whitespace().collect();
            let [x, y] = items[..] else {
                return Err(ModelError::Syntax {
                    line,
                    message: "a specification line needs exactly two states".to_string(),
                });
            };
            let find = |n: &str| {
                a.state_by_name(n)
                    .ok_or_else(|| ModelError::UndeclaredState(n.to_string()).at(line))
            };
            let (x, y) = (find(x)?, find(y)?);
            if x == y {
                return Err(ModelError::ReflexivePair(a.state_name(x).to_string()).at(line));
            }
            pairs.push((x, y));
        }
        Specification::new(a, pairs)
    }

    pub fn to_text(&self, a: &Fsa) -> String {
        self.pairs
            .iter()
            .map(|(x, y)| format!("{} {}\n", a.state_name(*x), a.state_name(*y)))
            .collect()
    }
}
