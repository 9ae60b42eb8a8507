//! Plain-text serialization for [`JointDist`] and [`CondChannel`].
//!
//! A joint distribution is a header line `vars: name:card,...` followed by
//! one probability per line in row-major (canonical) order. A channel uses
//! `inputs:` and `outputs:` header lines followed by the rows flattened in
//! row-major order. Probabilities are written with 17 significant digits,
//! which round-trips f64 exactly.

use std::io::{BufRead, Write};

use super::{CondChannel, JointDist, Var, VarId};
use crate::error::{Error, Result};

fn write_prob(w: &mut impl Write, p: f64) -> Result<()> {
    writeln!(w, "{p:.16e}")?;
    Ok(())
}

fn fmt_ids(ids: &[VarId]) -> String {
    ids.iter()
        .map(|id| format!("{}:{}", id.var, id.card))
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_ids(s: &str) -> Result<Vec<VarId>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|part| {
            let (name, card) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::parse(format!("expected `name:card`, got `{part}`")))?;
            let card: usize = card
                .parse()
                .map_err(|_| Error::parse(format!("bad cardinality in `{part}`")))?;
            Ok(VarId::new(Var::parse(name)?, card))
        })
        .collect()
}

fn parse_probs(lines: &mut impl Iterator<Item = std::io::Result<String>>) -> Result<Vec<f64>> {
    let mut probs = Vec::new();
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        probs.push(
            t.parse::<f64>()
                .map_err(|_| Error::parse(format!("bad probability `{t}`")))?,
        );
    }
    Ok(probs)
}

impl JointDist {
    pub fn write_text(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "vars: {}", fmt_ids(self.vars()))?;
        for &p in self.probs() {
            write_prob(w, p)?;
        }
        Ok(())
    }

    pub fn read_text(r: impl BufRead) -> Result<JointDist> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("empty input"))??;
        let body = header
            .strip_prefix("vars:")
            .ok_or_else(|| Error::parse("expected `vars:` header"))?;
        JointDist::new(parse_ids(body)?, parse_probs(&mut lines)?)
    }
}

impl CondChannel {
    pub fn write_text(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "inputs: {}", fmt_ids(self.inputs()))?;
        writeln!(w, "outputs: {}", fmt_ids(self.outputs()))?;
        for &p in self.rows() {
            write_prob(w, p)?;
        }
        Ok(())
    }

    pub fn read_text(r: impl BufRead) -> Result<CondChannel> {
        let mut lines = r.lines();
        let in_header = lines
            .next()
            .ok_or_else(|| Error::parse("empty input"))??;
        let inputs = parse_ids(
            in_header
                .strip_prefix("inputs:")
                .ok_or_else(|| Error::parse("expected `inputs:` header"))?,
        )?;
        let out_header = lines
            .next()
            .ok_or_else(|| Error::parse("missing `outputs:` header"))??;
        let outputs = parse_ids(
            out_header
                .strip_prefix("outputs:")
                .ok_or_else(|| Error::parse("expected `outputs:` header"))?,
        )?;
        CondChannel::new(inputs, outputs, parse_probs(&mut lines)?)
    }
}
