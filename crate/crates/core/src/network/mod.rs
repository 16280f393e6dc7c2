//! # Requirements Contract Network
//!
//! Events (expectations, acceptances, exercises of rights, discharges of
//! obligations, artifact productions and value outcomes) joined by
//! "is necessary for" links. A link `a -> b` means `b` cannot happen unless
//! `a` has; the full set of links into `b` is sufficient for `b`.
//!
//! [`canonical_network`] builds the fixed three-role network. Enactment is
//! simulated by [`Network::fire`] and [`Network::simulate`].

mod canonical;
mod enact;
mod validate;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::roles::{Clause, ObligationKind, RightKind, RoleId};

pub use canonical::{canonical_network, ids};
pub use enact::{
    EnactmentState, FireError, RetryPolicy, ScheduleStep, Trace, TraceStep, Verdict, Violation,
};
pub use validate::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(String);

impl EventId {
    pub fn new(id: impl Into<String>) -> Self {
        EventId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EventId {
    fn from(s: &str) -> Self {
        EventId(s.to_string())
    }
}

/// The exercise of the right to request is split in two: an initial
/// communication that grounds the other parties' acceptances, and the full
/// exercise once every right and obligation has been accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Initial,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "of")]
pub enum EventKind {
    Expectation(RoleId),
    Accept(Clause),
    Exercise(RightKind, Phase),
    Discharge(ObligationKind),
    ArtifactProduction(String),
    Outcome(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventNode {
    pub id: EventId,
    pub kind: EventKind,
    pub role: RoleId,
}

/// `source` is necessary for `target`. A link with `requires_pass` is only
/// satisfied once validation has passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NecessaryForLink {
    pub source: EventId,
    pub target: EventId,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub requires_pass: bool,
}

impl NecessaryForLink {
    pub fn new(source: &str, target: &str) -> Self {
        NecessaryForLink {
            source: source.into(),
            target: target.into(),
            requires_pass: false,
        }
    }

    pub fn on_pass(source: &str, target: &str) -> Self {
        NecessaryForLink {
            requires_pass: true,
            ..Self::new(source, target)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Network {
    events: Vec<EventNode>,
    links: Vec<NecessaryForLink>,
    #[serde(skip)]
    index: HashMap<EventId, usize>,
    /// `preds[i]` lists `(source index, requires_pass)` for links into `i`.
    #[serde(skip)]
    preds: Vec<Vec<(usize, bool)>>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.events == other.events && self.links == other.links
    }
}

impl Network {
    /// Builds a network without checking it; see [`Network::validate`].
    /// Links with unknown endpoints are kept for diagnostics but ignored
    /// when firing. The first of several events sharing an id wins.
    pub fn new(events: Vec<EventNode>, links: Vec<NecessaryForLink>) -> Self {
        let mut index = HashMap::new();
        for (i, e) in events.iter().enumerate() {
            index.entry(e.id.clone()).or_insert(i);
        }
        let mut preds = vec![Vec::new(); events.len()];
        for l in &links {
            if let (Some(&s), Some(&t)) = (index.get(&l.source), index.get(&l.target)) {
                preds[t].push((s, l.requires_pass));
            }
        }
        Network {
            events,
            links,
            index,
            preds,
        }
    }

    pub fn events(&self) -> &[EventNode] {
        &self.events
    }

    pub fn links(&self) -> &[NecessaryForLink] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn index_of(&self, id: &EventId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn event(&self, id: &EventId) -> Option<&EventNode> {
        self.index_of(id).map(|i| &self.events[i])
    }

    pub fn find_kind(&self, kind: &EventKind) -> Option<usize> {
        self.events.iter().position(|e| &e.kind == kind)
    }

    /// Ids of the events no link points into.
    pub fn sources(&self) -> Vec<EventId> {
        self.preds
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_empty())
            .map(|(i, _)| self.events[i].id.clone())
            .collect()
    }

    pub(crate) fn preds_of(&self, i: usize) -> &[(usize, bool)] {
        &self.preds[i]
    }

    /// The event carrying the validation verdict.
    pub fn verdict_event(&self) -> Option<usize> {
        self.find_kind(&EventKind::Discharge(ObligationKind::OtV))
    }

    /// The event re-enabled after a failed validation.
    pub fn retry_event(&self) -> Option<usize> {
        self.find_kind(&EventKind::Exercise(RightKind::RtR, Phase::Full))
    }
}

impl<'de> Deserialize<'de> for Network {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            events: Vec<EventNode>,
            links: Vec<NecessaryForLink>,
        }
        let raw = Raw::deserialize(d)?;
        Ok(Network::new(raw.events, raw.links))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_round_trip_rebuilds_index() {
        let net = canonical_network();
        let json = serde_json::to_string(&net).unwrap();
        let back: Network = serde_json::from_str(&json).unwrap();
        assert_eq!(back, net);
        assert_eq!(
            back.index_of(&ids::DISCHARGE_OTV.into()),
            net.index_of(&ids::DISCHARGE_OTV.into())
        );
    }

    #[test]
    fn event_kind_json_shape() {
        let k = EventKind::Exercise(RightKind::RtR, Phase::Initial);
        assert_eq!(
            serde_json::to_string(&k).unwrap(),
            r#"{"type":"exercise","of":["RtR","initial"]}"#
        );
        let k = EventKind::Accept(Clause::Obligation(ObligationKind::OtRS));
        assert_eq!(
            serde_json::to_string(&k).unwrap(),
            r#"{"type":"accept","of":"OtRS"}"#
        );
        let back: EventKind = serde_json::from_str(r#"{"type":"accept","of":"RtRV"}"#).unwrap();
        assert_eq!(back, EventKind::Accept(Clause::Right(RightKind::RtRV)));
    }
}
