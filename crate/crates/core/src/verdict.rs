use alloc::string::String;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    HoldsToDepth,
    FailsAtDepth,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::HoldsToDepth => "holds_to_depth",
            Status::FailsAtDepth => "fails_at_depth",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// Finite-depth certificate for a property of an infinite algebra.
///
/// `depth` is the weight window the evidence comes from. `trace` records the
/// dimension sequences per window that the decision was based on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub property: String,
    pub status: Status,
    pub depth: i64,
    pub witness: Option<String>,
    pub trace: Vec<(i64, Vec<usize>)>,
}

impl Verdict {
    pub fn holds(property: &str, depth: i64) -> Self {
        Self::new(property, Status::HoldsToDepth, depth, None)
    }

    pub fn fails(property: &str, depth: i64, witness: String) -> Self {
        Self::new(property, Status::FailsAtDepth, depth, Some(witness))
    }

    pub fn inconclusive(property: &str, depth: i64) -> Self {
        Self::new(property, Status::Inconclusive, depth, None)
    }

    fn new(property: &str, status: Status, depth: i64, witness: Option<String>) -> Self {
        Self {
            property: property.into(),
            status,
            depth,
            witness,
            trace: Vec::new(),
        }
    }

    pub fn with_trace(mut self, trace: Vec<(i64, Vec<usize>)>) -> Self {
        self.trace = trace;
        self
    }

    pub fn with_witness(mut self, witness: String) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::HoldsToDepth
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::FailsAtDepth
    }
}
