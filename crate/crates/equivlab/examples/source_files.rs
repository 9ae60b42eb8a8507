//! Serialize sources and channels to the plain-text format the CLI reads.
//!
//! ```bash
//! cargo run --release --example source_files
//! ```

use equivlab::infomeasures::{CondChannel, JointDist, Var, VarId};
use equivlab::regions::SourcePair;

fn main() -> equivlab::Result<()> {
    // An asymmetric correlated pair, written the way `--source <path>`
    // expects it.
    let src = SourcePair::new(JointDist::new(
        vec![VarId::new(Var::X, 2), VarId::new(Var::Y, 3)],
        vec![0.30, 0.18, 0.07, 0.05, 0.15, 0.25],
    )?)?;
    let mut text = Vec::new();
    src.joint().write_text(&mut text)?;
    println!("--- joint distribution file ---");
    print!("{}", String::from_utf8(text.clone()).expect("UTF-8"));

    let parsed = JointDist::read_text(&text[..])?;
    assert_eq!(&parsed, src.joint());
    println!("--- round-trips exactly ---");

    let ch = CondChannel::bsc(Var::Y, Var::V, 0.11)?;
    let mut text = Vec::new();
    ch.write_text(&mut text)?;
    println!("--- channel file ---");
    print!("{}", String::from_utf8(text).expect("UTF-8"));
    Ok(())
}
