//! Verified construction: a bad fingerprint function is rejected and resampled.

use gamma_index::kr::verify_pow2_collision_free;
use gamma_index::{attractor_from_lz77, lz77_parse, IndexBuilder, KrFunction, Text};

fn main() -> gamma_index::Result<()> {
    let text = Text::new(gamma_index::corpus::random(4, 2_000, 1)?)?;
    let attractor = attractor_from_lz77(&lz77_parse(&text), &text);

    let tiny = KrFunction::with_modulus(7, 0)?;
    println!("q = 7 collision-free: {}", verify_pow2_collision_free(&tiny, &text));

    // the first three samples use q = 7 and must be thrown away
    let (index, report) = IndexBuilder::new()
        .fingerprint_sampler(|attempt| match attempt {
            0..=2 => KrFunction::with_modulus(7, attempt as u64),
            _ => KrFunction::new(2, attempt as u64),
        })
        .build_with_report(&text, &attractor)?;
    println!("accepted q = {} after {} attempts", report.kr.modulus(), report.attempts);
    assert_eq!(index.locate(&text[500..520])?.first(), Some(&500));

    // without verification the first sample is kept
    let fast = IndexBuilder::new().verify(false).seed(9).build(&text, &attractor)?;
    println!("monte carlo build verified: {}", fast.is_verified());
    Ok(())
}
