use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::{EventId, Network};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Diagnostic {
    DuplicateId {
        id: EventId,
    },
    DanglingEndpoint {
        link: usize,
        endpoint: EventId,
    },
    SelfLoop {
        id: EventId,
    },
    /// Members of one strongly connected component, in event order.
    Cycle {
        members: Vec<EventId>,
    },
    Unreachable {
        id: EventId,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateId { id } => write!(f, "duplicate event id `{id}`"),
            Diagnostic::DanglingEndpoint { link, endpoint } => {
                write!(f, "link #{link} refers to unknown event `{endpoint}`")
            }
            Diagnostic::SelfLoop { id } => write!(f, "self-loop on `{id}`"),
            Diagnostic::Cycle { members } => {
                let names: Vec<&str> = members.iter().map(EventId::as_str).collect();
                write!(f, "cycle through {{{}}}", names.join(", "))
            }
            Diagnostic::Unreachable { id } => {
                write!(f, "`{id}` is not reachable from any source-less event")
            }
        }
    }
}

impl Network {
    /// Empty iff ids are unique, every link endpoint exists, there are no
    /// self-loops or cycles, and every event is reachable from a source-less
    /// event.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();

        let mut seen = HashSet::new();
        for e in &self.events {
            if !seen.insert(&e.id) {
                out.push(Diagnostic::DuplicateId { id: e.id.clone() });
            }
        }

        let mut graph = DiGraph::<usize, ()>::new();
        let nodes: Vec<_> = (0..self.events.len()).map(|i| graph.add_node(i)).collect();
        let mut succ: HashMap<usize, Vec<usize>> = HashMap::new();
        for (k, l) in self.links.iter().enumerate() {
            let ends = [&l.source, &l.target].map(|id| (id, self.index_of(id)));
            for (id, idx) in ends {
                if idx.is_none() {
                    out.push(Diagnostic::DanglingEndpoint {
                        link: k,
                        endpoint: id.clone(),
                    });
                }
            }
            let (Some(s), Some(t)) = (ends[0].1, ends[1].1) else {
                continue;
            };
            if s == t {
                out.push(Diagnostic::SelfLoop {
                    id: l.source.clone(),
                });
                continue;
            }
            graph.add_edge(nodes[s], nodes[t], ());
            succ.entry(s).or_default().push(t);
        }

        let mut components: Vec<Vec<usize>> = tarjan_scc(&graph)
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let mut m: Vec<usize> = c.into_iter().map(|n| graph[n]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        components.sort();
        for c in components {
            out.push(Diagnostic::Cycle {
                members: c.into_iter().map(|i| self.events[i].id.clone()).collect(),
            });
        }

        let mut reached = vec![false; self.events.len()];
        let mut queue: VecDeque<usize> = (0..self.events.len())
            .filter(|&i| self.preds_of(i).is_empty())
            .collect();
        for &i in &queue {
            reached[i] = true;
        }
        while let Some(i) = queue.pop_front() {
            for &t in succ.get(&i).into_iter().flatten() {
                if !reached[t] {
                    reached[t] = true;
                    queue.push_back(t);
                }
            }
        }
        for (i, r) in reached.iter().enumerate() {
            if !r && self.index_of(&self.events[i].id) == Some(i) {
                out.push(Diagnostic::Unreachable {
                    id: self.events[i].id.clone(),
                });
            }
        }
        out
    }
}
