use super::{EventKind, EventNode, NecessaryForLink, Network, Phase};
use crate::roles::{Clause, ObligationKind, RightKind, RoleId};

/// Event ids of the canonical network.
pub mod ids {
    pub const EXPECT_REQUESTER: &str = "E^R";
    pub const EXPECT_MAKER: &str = "E^P";
    pub const EXPECT_EVALUATOR: &str = "E^V";
    pub const EXERCISE_RTR_INITIAL: &str = "exercise(RtR,initial)";
    pub const ACCEPT_OTR: &str = "accept(OtR)";
    pub const ACCEPT_OTV: &str = "accept(OtV)";
    pub const ACCEPT_OTRS: &str = "accept(OtRS)";
    pub const ACCEPT_RTRS: &str = "accept(RtRS)";
    pub const ACCEPT_OTRV: &str = "accept(OtRV)";
    pub const ACCEPT_RTRV: &str = "accept(RtRV)";
    pub const EXERCISE_RTR_FULL: &str = "exercise(RtR,full)";
    pub const PRODUCE_REQUESTER_SETS: &str = "produce(K^R,R^R)";
    pub const DISCHARGE_OTR: &str = "discharge(OtR)";
    pub const PRODUCE_MAKER_OUTPUTS: &str = "produce(K^P,R^P,S^P,P^P)";
    pub const DISCHARGE_OTV: &str = "discharge(OtV)";
    pub const EXERCISE_RTRV: &str = "exercise(RtRV)";
    pub const EXERCISE_RTRS: &str = "exercise(RtRS)";
    pub const VALUE_REQUESTER: &str = "V(P^R)";
    pub const VALUE_MAKER: &str = "V(A(OtR))";
    pub const VALUE_EVALUATOR: &str = "V(A(OtV))";

    /// The three value outcomes.
    pub const OUTCOMES: [&str; 3] = [VALUE_REQUESTER, VALUE_MAKER, VALUE_EVALUATOR];
}

use ids::*;

fn node(id: &str, kind: EventKind, role: RoleId) -> EventNode {
    EventNode {
        id: id.into(),
        kind,
        role,
    }
}

/// The fixed three-role network.
///
/// Accepting and initially exercising the right to request are one event
/// (`exercise(RtR,initial)`), which keeps the graph acyclic while the
/// Maker's and Evaluator's acceptances still depend on it.
pub fn canonical_network() -> Network {
    use RoleId::*;
    let accept_o = |o| EventKind::Accept(Clause::Obligation(o));
    let accept_r = |r| EventKind::Accept(Clause::Right(r));

    let events = vec![
        node(
            EXPECT_REQUESTER,
            EventKind::Expectation(Requester),
            Requester,
        ),
        node(EXPECT_MAKER, EventKind::Expectation(Maker), Maker),
        node(
            EXPECT_EVALUATOR,
            EventKind::Expectation(Evaluator),
            Evaluator,
        ),
        node(
            EXERCISE_RTR_INITIAL,
            EventKind::Exercise(RightKind::RtR, Phase::Initial),
            Requester,
        ),
        node(ACCEPT_OTR, accept_o(ObligationKind::OtR), Maker),
        node(ACCEPT_OTV, accept_o(ObligationKind::OtV), Evaluator),
        node(ACCEPT_OTRS, accept_o(ObligationKind::OtRS), Requester),
        node(ACCEPT_RTRS, accept_r(RightKind::RtRS), Maker),
        node(ACCEPT_OTRV, accept_o(ObligationKind::OtRV), Requester),
        node(ACCEPT_RTRV, accept_r(RightKind::RtRV), Evaluator),
        node(
            EXERCISE_RTR_FULL,
            EventKind::Exercise(RightKind::RtR, Phase::Full),
            Requester,
        ),
        node(
            PRODUCE_REQUESTER_SETS,
            EventKind::ArtifactProduction("K^R,R^R".into()),
            Requester,
        ),
        node(
            DISCHARGE_OTR,
            EventKind::Discharge(ObligationKind::OtR),
            Maker,
        ),
        node(
            PRODUCE_MAKER_OUTPUTS,
            EventKind::ArtifactProduction("K^P,R^P,S^P,P^P".into()),
            Maker,
        ),
        node(
            DISCHARGE_OTV,
            EventKind::Discharge(ObligationKind::OtV),
            Evaluator,
        ),
        node(
            EXERCISE_RTRV,
            EventKind::Exercise(RightKind::RtRV, Phase::Full),
            Evaluator,
        ),
        node(
            VALUE_EVALUATOR,
            EventKind::Outcome("V(A(OtV))".into()),
            Evaluator,
        ),
        node(
            VALUE_REQUESTER,
            EventKind::Outcome("V(P^R)".into()),
            Requester,
        ),
        node(
            EXERCISE_RTRS,
            EventKind::Exercise(RightKind::RtRS, Phase::Full),
            Maker,
        ),
        node(VALUE_MAKER, EventKind::Outcome("V(A(OtR))".into()), Maker),
    ];

    let l = NecessaryForLink::new;
    let links = vec![
        l(EXPECT_REQUESTER, EXERCISE_RTR_INITIAL),
        l(EXERCISE_RTR_INITIAL, ACCEPT_OTR),
        l(EXERCISE_RTR_INITIAL, ACCEPT_OTV),
        l(EXPECT_MAKER, ACCEPT_OTR),
        l(EXPECT_EVALUATOR, ACCEPT_OTV),
        l(ACCEPT_OTRS, ACCEPT_RTRS),
        l(ACCEPT_RTRS, ACCEPT_OTR),
        l(ACCEPT_OTRV, ACCEPT_RTRV),
        l(ACCEPT_RTRV, ACCEPT_OTV),
        l(ACCEPT_OTR, EXERCISE_RTR_FULL),
        l(ACCEPT_OTV, EXERCISE_RTR_FULL),
        l(EXERCISE_RTR_FULL, PRODUCE_REQUESTER_SETS),
        l(PRODUCE_REQUESTER_SETS, DISCHARGE_OTR),
        l(DISCHARGE_OTR, PRODUCE_MAKER_OUTPUTS),
        l(PRODUCE_MAKER_OUTPUTS, DISCHARGE_OTV),
        l(DISCHARGE_OTV, EXERCISE_RTRV),
        l(EXERCISE_RTRV, VALUE_EVALUATOR),
        NecessaryForLink::on_pass(DISCHARGE_OTV, VALUE_REQUESTER),
        NecessaryForLink::on_pass(DISCHARGE_OTV, EXERCISE_RTRS),
        l(EXERCISE_RTRS, VALUE_MAKER),
    ];
    Network::new(events, links)
}
