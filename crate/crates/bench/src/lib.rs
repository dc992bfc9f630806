//! Fixtures shared by the benchmarks in benches/.

use cnlwiki::wiki::Clock;
use cnlwiki::{corpus, WikiState};

pub const GEOGRAPHY: &str = include_str!("../../core/tests/fixtures/geography.corpus");

/// The geography wiki, fully imported.
pub fn geography() -> WikiState {
    let mut state = WikiState::new().with_clock(Clock::Fixed(0));
    let report = corpus::import(&mut state, GEOGRAPHY);
    assert!(report.is_ok(), "{report}");
    state
}
