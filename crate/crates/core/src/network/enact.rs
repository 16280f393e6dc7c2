//! Enactment: firing events in "is necessary for" order.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{EventId, Network};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// What happens after a failed validation: loop back to the full exercise
/// of the right to request, at most `max_retries` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub enabled: bool,
    pub max_retries: u32,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            enabled: true,
            max_retries: 3,
        }
    }
}

impl RetryPolicy {
    pub fn off() -> Self {
        RetryPolicy {
            enabled: false,
            max_retries: 0,
        }
    }

    /// `0` disables retries.
    pub fn with_cap(max_retries: u32) -> Self {
        RetryPolicy {
            enabled: max_retries > 0,
            max_retries,
        }
    }
}

/// Which events have fired, indexed by position in the [`Network`] the
/// state was produced from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EnactmentState {
    fired: Vec<bool>,
    verdict: Option<Verdict>,
    retry_count: u32,
}

impl EnactmentState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_fired(&self, index: usize) -> bool {
        self.fired.get(index).copied().unwrap_or(false)
    }

    pub fn has_fired(&self, net: &Network, id: &EventId) -> bool {
        net.index_of(id).is_some_and(|i| self.is_fired(i))
    }

    pub fn fired_count(&self) -> usize {
        self.fired.iter().filter(|&&f| f).count()
    }

    pub fn fired_ids(&self, net: &Network) -> BTreeSet<EventId> {
        (0..net.len())
            .filter(|&i| self.is_fired(i))
            .map(|i| net.events()[i].id.clone())
            .collect()
    }

    /// Set only while the verdict event is fired.
    pub fn verdict(&self) -> Option<Verdict> {
        self.verdict
    }

    pub fn retry_count(&self) -> u32 {
        self.retry_count
    }

    fn mark(&mut self, index: usize, value: bool) {
        if self.fired.len() <= index {
            self.fired.resize(index + 1, false);
        }
        self.fired[index] = value;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FireError {
    #[error("unknown event `{event}`")]
    UnknownEvent { event: EventId },
    #[error("`{event}` has already fired")]
    AlreadyFired { event: EventId },
    #[error("`{event}` is not enabled; waiting on {}", join(.waiting_on))]
    NotEnabled {
        event: EventId,
        waiting_on: Vec<EventId>,
    },
    #[error("`{event}` needs a pass/fail verdict")]
    MissingVerdict { event: EventId },
    #[error("`{event}` does not take a verdict")]
    UnexpectedVerdict { event: EventId },
}

fn join(ids: &[EventId]) -> String {
    let names: Vec<&str> = ids.iter().map(EventId::as_str).collect();
    format!("{{{}}}", names.join(", "))
}

/// One entry of a schedule: the event to fire and, for the validation
/// discharge, its verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleStep {
    pub event: EventId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

impl ScheduleStep {
    pub fn new(event: &str) -> Self {
        ScheduleStep {
            event: event.into(),
            verdict: None,
        }
    }

    pub fn with_verdict(event: &str, verdict: Verdict) -> Self {
        ScheduleStep {
            event: event.into(),
            verdict: Some(verdict),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub index: usize,
    pub event: EventId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub fired_count: usize,
    /// A failed validation looped back to the full exercise of the right
    /// to request.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub retried: bool,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.index, self.event, self.fired_count)?;
        if let Some(v) = self.verdict {
            write!(f, " {v}")?;
        }
        if self.retried {
            f.write_str(" retry")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub error: FireError,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    /// State after each successful step.
    #[serde(skip)]
    pub states: Vec<EnactmentState>,
    pub violation: Option<Violation>,
}

impl Trace {
    /// State after the last successful step.
    pub fn final_state(&self) -> EnactmentState {
        self.states.last().cloned().unwrap_or_default()
    }
}

impl Network {
    fn is_enabled(&self, st: &EnactmentState, i: usize) -> bool {
        !st.is_fired(i)
            && self.preds_of(i).iter().all(|&(s, requires_pass)| {
                st.is_fired(s) && (!requires_pass || st.verdict == Some(Verdict::Pass))
            })
    }

    /// Indices of the unfired events whose every predecessor has fired.
    pub fn enabled_indices(&self, st: &EnactmentState) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.is_enabled(st, i))
            .collect()
    }

    pub fn enabled_events(&self, st: &EnactmentState) -> BTreeSet<EventId> {
        self.enabled_indices(st)
            .into_iter()
            .map(|i| self.events[i].id.clone())
            .collect()
    }

    /// Events reachable from `from` along links, including `from`.
    fn downstream(&self, from: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            for (t, preds) in self.preds.iter().enumerate() {
                if !seen[t] && preds.iter().any(|&(s, _)| s == i) {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        (0..self.len()).filter(|&i| seen[i]).collect()
    }

    /// Fires `index`; the returned flag reports a retry loop-back.
    pub fn fire_index(
        &self,
        st: &EnactmentState,
        index: usize,
        verdict: Option<Verdict>,
        policy: RetryPolicy,
    ) -> Result<(EnactmentState, bool), FireError> {
        let event = self.events[index].id.clone();
        if st.is_fired(index) {
            return Err(FireError::AlreadyFired { event });
        }
        if !self.is_enabled(st, index) {
            let waiting_on = self
                .preds_of(index)
                .iter()
                .filter(|&&(s, pass)| {
                    !st.is_fired(s) || (pass && st.verdict != Some(Verdict::Pass))
                })
                .map(|&(s, _)| self.events[s].id.clone())
                .collect();
            return Err(FireError::NotEnabled { event, waiting_on });
        }
        let is_verdict_event = self.verdict_event() == Some(index);
        match (is_verdict_event, verdict) {
            (true, None) => return Err(FireError::MissingVerdict { event }),
            (false, Some(_)) => return Err(FireError::UnexpectedVerdict { event }),
            _ => {}
        }

        let mut next = st.clone();
        next.mark(index, true);
        if !is_verdict_event {
            return Ok((next, false));
        }
        next.verdict = verdict;
        if verdict == Some(Verdict::Fail) && policy.enabled && st.retry_count < policy.max_retries {
            if let Some(retry) = self.retry_event() {
                let round = self.downstream(retry);
                if round.contains(&index) {
                    for i in round {
                        next.mark(i, false);
                    }
                    next.verdict = None;
                    next.retry_count += 1;
                    return Ok((next, true));
                }
            }
        }
        Ok((next, false))
    }

    /// Fires `event` and returns the resulting state.
    ///
    /// A verdict must be supplied exactly for the validation discharge. A
    /// failing verdict under an enabled retry policy with retries left
    /// unfires the full exercise of the right to request and everything
    /// downstream of it, so that round can be re-run.
    pub fn fire(
        &self,
        st: &EnactmentState,
        event: &EventId,
        verdict: Option<Verdict>,
        policy: RetryPolicy,
    ) -> Result<EnactmentState, FireError> {
        let index = self
            .index_of(event)
            .ok_or_else(|| FireError::UnknownEvent {
                event: event.clone(),
            })?;
        self.fire_index(st, index, verdict, policy).map(|(s, _)| s)
    }

    /// Folds [`Network::fire`] over `schedule` from the empty state,
    /// stopping at the first violation.
    pub fn simulate(&self, schedule: &[ScheduleStep], policy: RetryPolicy) -> Trace {
        let mut trace = Trace {
            steps: Vec::new(),
            states: Vec::new(),
            violation: None,
        };
        let mut st = EnactmentState::new();
        for (index, step) in schedule.iter().enumerate() {
            let result = match self.index_of(&step.event) {
                None => Err(FireError::UnknownEvent {
                    event: step.event.clone(),
                }),
                Some(i) => self.fire_index(&st, i, step.verdict, policy),
            };
            match result {
                Ok((next, retried)) => {
                    trace.steps.push(TraceStep {
                        index,
                        event: step.event.clone(),
                        verdict: step.verdict,
                        fired_count: next.fired_count(),
                        retried,
                    });
                    trace.states.push(next.clone());
                    st = next;
                }
                Err(error) => {
                    trace.violation = Some(Violation { index, error });
                    break;
                }
            }
        }
        trace
    }
}
