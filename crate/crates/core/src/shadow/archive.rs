//! Newline-delimited snapshot archives.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::snapshot::{PlanRef, Randomizer, Snapshot};
use crate::architectures::Architecture;
use crate::clifford::BitString;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub architecture: String,
    #[serde(rename = "N")]
    pub n: usize,
    /// Absent for global Clifford snapshots.
    pub t: Option<usize>,
    pub seed: u64,
    pub b_hex: String,
}

impl From<&Snapshot> for SnapshotRecord {
    fn from(s: &Snapshot) -> Self {
        SnapshotRecord {
            architecture: s.plan.randomizer.label().to_string(),
            n: s.plan.n,
            t: s.plan.randomizer.depth(),
            seed: s.plan.seed,
            b_hex: s.outcome.to_hex(),
        }
    }
}

impl TryFrom<&SnapshotRecord> for Snapshot {
    type Error = Error;
    fn try_from(r: &SnapshotRecord) -> Result<Self> {
        let randomizer = match (r.architecture.as_str(), r.t) {
            ("global", None) => Randomizer::Global,
            (name, Some(depth)) => Randomizer::Circuit {
                architecture: name.parse::<Architecture>()?,
                depth,
            },
            (name, None) => return Err(Error::Parse(format!("record for {name} has no depth"))),
        };
        Ok(Snapshot {
            plan: PlanRef { randomizer, n: r.n, seed: r.seed },
            outcome: BitString::from_hex(r.n, &r.b_hex)?,
        })
    }
}

pub fn write_snapshots<W: Write>(mut w: W, snaps: &[Snapshot]) -> Result<()> {
    for s in snaps {
        let line = serde_json::to_string(&SnapshotRecord::from(s)).map_err(|e| Error::Parse(e.to_string()))?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn read_snapshots<R: BufRead>(r: R) -> Result<Vec<Snapshot>> {
    let mut out = vec![];
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: SnapshotRecord = serde_json::from_str(&line).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        out.push(Snapshot::try_from(&rec)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::StateSpec;
    use crate::shadow::runner::MonteCarlo;
    use crate::shadow::snapshot::Preparation;

    #[test]
    fn roundtrip() {
        for randomizer in [Randomizer::Circuit { architecture: Architecture::Grid2d, depth: 2 }, Randomizer::Global] {
            let m = MonteCarlo {
                n: 9,
                randomizer,
                prep: Preparation::pure(StateSpec::Cluster2d),
                m: 4,
                r: 1,
                master_seed: 3,
            };
            let snaps = m.snapshots(0).unwrap();
            let mut buf = vec![];
            write_snapshots(&mut buf, &snaps).unwrap();
            let text = String::from_utf8(buf.clone()).unwrap();
            assert!(text.lines().next().unwrap().contains("\"N\":9"));
            assert_eq!(read_snapshots(&buf[..]).unwrap(), snaps);
        }
        assert!(read_snapshots(&b"{\"architecture\":\"ring\",\"N\":2,\"t\":1,\"seed\":0,\"b_hex\":\"0\"}\n"[..]).is_err());
    }
}
