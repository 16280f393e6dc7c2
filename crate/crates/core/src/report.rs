//! Reports for the command-line front end. Each command reads one contract
//! document and returns a JSON result, a text rendering and an exit status.

use std::collections::BTreeMap;
use std::fmt::{self, Display, Write as _};

use serde::Serialize;
use serde_json::{json, Value};

use crate::alignment::{
    budget_check, conflict_scan, expected_value, format_rational, interest_case,
    marginal_situation, viability, ASSUMPTIONS,
};
use crate::document::{ContractDocument, RpSelection};
use crate::gate::requirement_status;
use crate::logic::{check_default_rp, Atom, FormulaSet, Valuation};
use crate::network::{EventKind, RetryPolicy};
use crate::roles::RoleId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    CheckRp,
    Gate,
    Enact,
    Align,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::CheckRp => "check-rp",
            Command::Gate => "gate",
            Command::Enact => "enact",
            Command::Align => "align",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    fn from_pass(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Command,
    pub status: Status,
    /// Command-specific result; `null` on input errors.
    pub result: Value,
    pub error: Option<String>,
    pub text: String,
}

impl Report {
    fn error(command: Command, e: impl Display) -> Self {
        let msg = e.to_string();
        Report {
            command,
            status: Status::Error,
            result: Value::Null,
            text: format!("error: {msg}\n"),
            error: Some(msg),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// Machine-readable form. Keys are sorted, so equal inputs give equal bytes.
    pub fn to_json(&self) -> String {
        let mut obj = json!({
            "command": self.command.name(),
            "status": self.status,
            "exit_code": self.exit_code(),
        });
        if let Some(e) = &self.error {
            obj["error"] = json!(e);
        } else {
            obj["result"] = self.result.clone();
        }
        let mut s = serde_json::to_string_pretty(&obj).expect("report is serialisable");
        s.push('\n');
        s
    }
}

macro_rules! tryr {
    ($cmd:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Report::error($cmd, err),
        }
    };
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report is serialisable")
}

fn fmt_set(s: &FormulaSet) -> String {
    let items: Vec<String> = s.iter().map(|f| f.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn fmt_valuation(v: &Valuation) -> String {
    if v.is_empty() {
        return "(no atoms)".to_string();
    }
    let items: Vec<String> = v.iter().map(|(a, b)| format!("{a}={b}")).collect();
    items.join(" ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn line(out: &mut String, args: fmt::Arguments<'_>) {
    out.write_fmt(args).expect("writing to a String");
    out.push('\n');
}

/// Parses the document and resolves every section, reporting network and
/// schedule problems as check failures.
pub fn cmd_validate(text: &str) -> Report {
    let cmd = Command::Validate;
    let doc = tryr!(cmd, ContractDocument::from_json(text));
    tryr!(cmd, doc.contract_doc());
    let sets = tryr!(cmd, doc.role_sets());
    if doc.economics.is_some() {
        tryr!(cmd, doc.econ_profile());
        tryr!(cmd, doc.deltas());
    }
    let net = doc.network();
    let steps = tryr!(cmd, doc.schedule_steps(&net));

    let diagnostics = net.validate();
    let unknown: Vec<String> = steps
        .iter()
        .filter(|s| net.index_of(&s.event).is_none())
        .map(|s| s.event.to_string())
        .collect();
    let formulas = doc.propositions.k_r.len()
        + doc.propositions.r_r.len()
        + doc.propositions.s_p.as_ref().map_or(0, FormulaSet::len);
    let ok = diagnostics.is_empty() && unknown.is_empty();

    let mut text_out = String::new();
    for d in &diagnostics {
        line(&mut text_out, format_args!("network: {d}"));
    }
    for e in &unknown {
        line(&mut text_out, format_args!("schedule: unknown event `{e}`"));
    }
    line(
        &mut text_out,
        format_args!(
            "{}: {} events, {} links, {} formulas, {} schedule steps",
            if ok { "valid" } else { "invalid" },
            net.len(),
            net.links().len(),
            formulas,
            steps.len()
        ),
    );

    Report {
        command: cmd,
        status: Status::from_pass(ok),
        result: json!({
            "network": {
                "events": net.len(),
                "links": net.links().len(),
                "diagnostics": diagnostics.iter().map(to_value).collect::<Vec<_>>(),
                "messages": diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            },
            "formulas": formulas,
            "role_sets": to_value(&sets),
            "schedule_steps": steps.len(),
            "unknown_schedule_events": unknown,
        }),
        error: None,
        text: text_out,
    }
}

/// Runs the requirements check on the selected roles' sets (the Evaluator's
/// by default).
pub fn cmd_check_rp(text: &str, sel: RpSelection) -> Report {
    let cmd = Command::CheckRp;
    let doc = tryr!(cmd, ContractDocument::from_json(text));
    let inst = tryr!(cmd, doc.rp_instance(sel));
    let v = check_default_rp(&inst);

    let failing = v
        .failing_requirement
        .and_then(|i| inst.r.iter().nth(i))
        .map(|f| f.to_string());
    let (witness_kind, witness) = match (&v.countermodel, &v.model) {
        (Some(c), _) => ("countermodel", Some(c)),
        (None, Some(m)) => ("model", Some(m)),
        (None, None) => ("none", None),
    };

    let mut t = String::new();
    line(&mut t, format_args!("K ({}): {}", sel.k, fmt_set(&inst.k)));
    line(&mut t, format_args!("S ({}): {}", sel.s, fmt_set(&inst.s)));
    line(&mut t, format_args!("R ({}): {}", sel.r, fmt_set(&inst.r)));
    line(&mut t, format_args!("entails: {}", yes_no(v.entails)));
    line(&mut t, format_args!("consistent: {}", yes_no(v.consistent)));
    if let (Some(c), Some(f)) = (&v.countermodel, &failing) {
        line(
            &mut t,
            format_args!(
                "countermodel (K ∪ S holds, `{f}` fails): {}",
                fmt_valuation(c)
            ),
        );
    }
    match &v.model {
        Some(m) => line(&mut t, format_args!("model of K ∪ S: {}", fmt_valuation(m))),
        None => line(&mut t, format_args!("no valuation satisfies K ∪ S")),
    }
    for n in &v.notes {
        line(&mut t, format_args!("note: {}", n.describe()));
    }
    line(
        &mut t,
        format_args!("verdict: {}", if v.passes() { "PASS" } else { "FAIL" }),
    );

    Report {
        command: cmd,
        status: Status::from_pass(v.passes()),
        result: json!({
            "selection": {"k": sel.k, "s": sel.s, "r": sel.r},
            "instance": to_value(&inst),
            "entails": v.entails,
            "consistent": v.consistent,
            "passes": v.passes(),
            "failing_requirement": failing,
            "witness": {"kind": witness_kind, "valuation": witness},
            "countermodel": v.countermodel,
            "model": v.model,
            "notes": v.notes.iter().map(|n| json!({"code": n, "text": n.describe()})).collect::<Vec<_>>(),
        }),
        error: None,
        text: t,
    }
}

/// Requirement status of every requested atom, or of `prop` alone, after
/// running the document's schedule.
pub fn cmd_gate(text: &str, prop: Option<&str>) -> Report {
    let cmd = Command::Gate;
    let doc = tryr!(cmd, ContractDocument::from_json(text));
    let contract = tryr!(cmd, doc.contract_doc());
    let net = doc.network();
    let steps = tryr!(cmd, doc.schedule_steps(&net));
    let trace = net.simulate(&steps, RetryPolicy::default());
    let state = trace.final_state();

    let atoms: Vec<Atom> = match prop {
        Some(p) => vec![tryr!(cmd, Atom::new(p))],
        None => contract.requested().keys().cloned().collect(),
    };
    let statuses: Vec<_> = atoms
        .iter()
        .map(|p| requirement_status(p, &contract, &net, &state))
        .collect();
    let all_granted = statuses.iter().all(|s| s.granted);

    let mut t = String::new();
    for s in &statuses {
        line(&mut t, format_args!("{s}"));
    }
    if statuses.is_empty() {
        line(&mut t, format_args!("no propositions requested"));
    }
    if let Some(v) = &trace.violation {
        line(
            &mut t,
            format_args!("note: schedule stopped at step {}: {}", v.index, v.error),
        );
    }

    Report {
        command: cmd,
        status: Status::from_pass(all_granted),
        result: json!({
            "statuses": to_value(&statuses),
            "fired": state.fired_ids(&net),
            "schedule_violation": to_value(&trace.violation),
        }),
        error: None,
        text: t,
    }
}

/// Validates the network and runs the schedule. `retry` caps the number of
/// loop-backs after a failed validation; zero disables them.
pub fn cmd_enact(text: &str, retry: Option<u32>) -> Report {
    let cmd = Command::Enact;
    let doc = tryr!(cmd, ContractDocument::from_json(text));
    let net = doc.network();
    let steps = tryr!(cmd, doc.schedule_steps(&net));

    let diagnostics = net.validate();
    if !diagnostics.is_empty() {
        let mut t = String::new();
        for d in &diagnostics {
            line(&mut t, format_args!("network: {d}"));
        }
        return Report {
            command: cmd,
            status: Status::Fail,
            result: json!({ "diagnostics": to_value(&diagnostics), "trace": Value::Null }),
            error: None,
            text: t,
        };
    }

    let policy = retry.map(RetryPolicy::with_cap).unwrap_or_default();
    let trace = net.simulate(&steps, policy);
    let state = trace.final_state();
    let outcomes: Vec<String> = net
        .events()
        .iter()
        .enumerate()
        .filter(|(i, e)| matches!(e.kind, EventKind::Outcome(_)) && state.is_fired(*i))
        .map(|(_, e)| e.id.to_string())
        .collect();
    let pending = net.enabled_events(&state);

    let mut t = String::new();
    for s in &trace.steps {
        line(&mut t, format_args!("{s}"));
    }
    match &trace.violation {
        Some(v) => line(
            &mut t,
            format_args!("violation at step {}: {}", v.index, v.error),
        ),
        None => line(
            &mut t,
            format_args!(
                "ok: {} fired, outcomes [{}], {} enabled",
                state.fired_count(),
                outcomes.join(", "),
                pending.len()
            ),
        ),
    }

    Report {
        command: cmd,
        status: Status::from_pass(trace.violation.is_none()),
        result: json!({
            "diagnostics": [],
            "retry": {"enabled": policy.enabled, "max_retries": policy.max_retries},
            "trace": to_value(&trace),
            "fired": state.fired_ids(&net),
            "outcomes": outcomes,
            "enabled": pending,
            "complete": pending.is_empty(),
            "verdict": state.verdict(),
            "retry_count": state.retry_count(),
        }),
        error: None,
        text: t,
    }
}

/// Expected values, viability, the budget cap and, where deltas are given,
/// marginal readings, interest cases and the conflict scan.
pub fn cmd_align(text: &str, coupled: bool) -> Report {
    let cmd = Command::Align;
    let doc = tryr!(cmd, ContractDocument::from_json(text));
    let profile = tryr!(cmd, doc.econ_profile());
    let deltas = tryr!(cmd, doc.deltas());

    let via = viability(&profile);
    let budget = budget_check(&profile);

    let mut t = String::new();
    let mut roles = BTreeMap::new();
    for role in RoleId::ALL {
        let e = profile.get(role);
        let ev = expected_value(&profile, role);
        let viable = via.per_role[&role];
        line(
            &mut t,
            format_args!(
                "{role}: EB={} EC={} EV={} {}",
                format_rational(&e.benefit),
                format_rational(&e.cost),
                format_rational(&ev),
                if viable { "viable" } else { "NOT viable" }
            ),
        );
        let mut entry = json!({
            "expectation": to_value(e),
            "expected_value": format_rational(&ev),
            "viable": viable,
        });
        if let Some(d) = deltas.get(&role) {
            let case = interest_case(d);
            let marginal = marginal_situation(d).ok();
            let ratio_text = marginal
                .as_ref()
                .map(|m| format!("{} {:?}", format_rational(&m.ratio), m.situation))
                .unwrap_or_else(|| "undefined".to_string());
            line(
                &mut t,
                format_args!(
                    "{role}: dB={} dC={} ratio={} case={} dV={}",
                    format_rational(&d.db),
                    format_rational(&d.dc),
                    ratio_text,
                    case.case,
                    format_rational(&case.dv)
                ),
            );
            entry["delta"] = to_value(d);
            entry["marginal"] = to_value(&marginal);
            entry["interest"] = to_value(&case);
        }
        roles.insert(role, entry);
    }
    line(
        &mut t,
        format_args!(
            "budget: {} (slack {})",
            if budget.passes { "pass" } else { "FAIL" },
            format_rational(&budget.slack)
        ),
    );

    let (conflict, conflict_note) = if deltas.len() == RoleId::ALL.len() {
        match conflict_scan(&deltas, coupled) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(format!("conflict scan skipped: {e}"))),
        }
    } else if deltas.is_empty() {
        (None, None)
    } else {
        (
            None,
            Some("conflict scan skipped: deltas not given for every role".to_string()),
        )
    };
    if let Some(c) = &conflict {
        let ratios: Vec<String> = c
            .ratios
            .iter()
            .map(|(r, v)| format!("{r}={}", format_rational(v)))
            .collect();
        let coupled_text = c
            .coupled_requester_ratio
            .as_ref()
            .map(|r| format!(", coupled requester={}", format_rational(r)))
            .unwrap_or_default();
        line(
            &mut t,
            format_args!(
                "conflict: {} (ratios {}{coupled_text})",
                if c.conflict { "FLAGGED" } else { "none" },
                ratios.join(" ")
            ),
        );
    }
    if let Some(n) = &conflict_note {
        line(&mut t, format_args!("note: {n}"));
    }

    let conflicted = conflict.as_ref().is_some_and(|c| c.conflict);
    let ok = via.entry_feasible && budget.passes && !conflicted;
    line(
        &mut t,
        format_args!("verdict: {}", if ok { "PASS" } else { "FAIL" }),
    );

    Report {
        command: cmd,
        status: Status::from_pass(ok),
        result: json!({
            "roles": roles,
            "entry_feasible": via.entry_feasible,
            "budget": to_value(&budget),
            "coupled": coupled,
            "conflict": to_value(&conflict),
            "notes": conflict_note.into_iter().collect::<Vec<_>>(),
            "assumptions": ASSUMPTIONS,
        }),
        error: None,
        text: t,
    }
}
