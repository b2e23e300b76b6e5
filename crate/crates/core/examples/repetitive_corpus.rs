//! How the index size tracks repetitiveness rather than length.
//!
//! `cargo run --release --example repetitive_corpus`

use std::time::Instant;

use gamma_index::corpus::CorpusSpec;
use gamma_index::{Index, Text};

fn main() -> gamma_index::Result<()> {
    let specs = [
        ("random", CorpusSpec::Random { len: 20_000, sigma: 4, seed: 1 }),
        ("20 copies, 1% edits", CorpusSpec::MutatedCopies { copies: 20, len: 1_000, rate: 0.01, sigma: 4, seed: 1 }),
        ("20 copies, 0.1% edits", CorpusSpec::MutatedCopies { copies: 20, len: 1_000, rate: 0.001, sigma: 4, seed: 1 }),
        ("fibonacci 22", CorpusSpec::Fibonacci { order: 22 }),
        ("thue-morse 15", CorpusSpec::ThueMorse { order: 15 }),
    ];
    println!("{:<22} {:>7} {:>6} {:>7} {:>6} {:>9}", "corpus", "n", "γ'", "w", "ratio", "build");
    for (name, spec) in specs {
        let text = Text::new(spec.generate()?)?;
        let clock = Instant::now();
        let index = Index::from_text(&text)?;
        let elapsed = clock.elapsed();
        let s = index.stats();
        println!(
            "{:<22} {:>7} {:>6} {:>7} {:>6.3} {:>8.1?}",
            name,
            s.tree.n,
            s.tree.gamma,
            s.tree.leaves,
            s.bound_ratio,
            elapsed
        );
    }
    Ok(())
}
