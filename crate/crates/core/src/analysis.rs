use crate::arrangement::{Arrangement, IntersectionPoset};
use crate::chambers::{enumerate_chambers, Chamber, ChamberSet};
use crate::error::{Error, Result};
use crate::flag::{generate_flag, verify_flag, Flag};
use crate::stratify::{Stratification, Stratum};

/// An arrangement together with a verified flag and everything derived from them.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub arrangement: Arrangement,
    pub poset: IntersectionPoset,
    pub chambers: ChamberSet,
    pub flag: Flag,
    pub strata: Stratification,
}

impl Analysis {
    /// Verifies `flag` against `arrangement`, then stratifies.
    pub fn new(arrangement: Arrangement, flag: Flag) -> Result<Self> {
        let poset = IntersectionPoset::build(&arrangement);
        let chambers = enumerate_chambers(&arrangement)?;
        if let Some(v) = verify_flag(&arrangement, &poset, &chambers, &flag)? {
            return Err(Error::FlagViolation(Box::new(v)));
        }
        Self::assemble(arrangement, poset, chambers, flag)
    }

    pub fn with_generated_flag(arrangement: Arrangement, seed: u64) -> Result<Self> {
        let poset = IntersectionPoset::build(&arrangement);
        let chambers = enumerate_chambers(&arrangement)?;
        let flag = generate_flag(&arrangement, &poset, &chambers, seed)?;
        Self::assemble(arrangement, poset, chambers, flag)
    }

    fn assemble(arrangement: Arrangement, poset: IntersectionPoset, chambers: ChamberSet, flag: Flag) -> Result<Self> {
        let strata = Stratification::build(&arrangement, &poset, &chambers, &flag)?;
        Ok(Analysis { arrangement, poset, chambers, flag, strata })
    }

    pub fn dim(&self) -> usize {
        self.arrangement.dim()
    }

    pub fn stratum(&self, chamber: usize) -> &Stratum {
        self.strata.of_chamber(chamber)
    }

    pub fn chamber(&self, id: usize) -> &Chamber {
        self.chambers.get(id)
    }
}
