/// Upper bounds on anything that gets materialized by enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest set whose powerset may be built.
    pub powerset_max: usize,
    /// Largest von Neumann numeral that may be built.
    pub ordinal_max: u64,
    /// Largest |T|^|S| for which all functions S → T may be listed.
    pub function_space_max: u128,
    /// Largest Cartesian product, cylinder, inverse projection or universal
    /// binary relation that may be listed.
    pub materialize_max: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            powerset_max: 20,
            ordinal_max: 10,
            function_space_max: 100_000,
            materialize_max: 1_000_000,
        }
    }
}

impl Limits {
    pub fn with_materialize_max(mut self, max: u128) -> Self {
        self.materialize_max = max;
        self
    }

    pub(crate) fn check(what: &'static str, size: u128, limit: u128) -> crate::Result<()> {
        if size > limit {
            Err(crate::Error::LimitExceeded { what, size, limit })
        } else {
            Ok(())
        }
    }
}
