//! Build an index over a short text, then locate and extract.

use gamma_index::{Index, OccurrenceKind, Text};

fn main() -> gamma_index::Result<()> {
    let text = Text::try_from("how much wood would a woodchuck chuck if a woodchuck could chuck wood")?;
    let index = Index::from_text(&text)?;

    for pattern in ["wood", "chuck", "ould", "beaver"] {
        let positions = index.locate(pattern.as_bytes())?;
        println!("{pattern:>8}: {positions:?}");
    }

    // primary occurrences cross a leaf boundary; the rest are copies of them
    let detailed = index.locate_detailed(b"woodchuck")?;
    let primary = detailed.iter().filter(|o| o.kind == OccurrenceKind::Primary).count();
    println!("woodchuck: {primary} primary, {} secondary", detailed.len() - primary);

    let snippet = index.extract(22, 9)?;
    println!("extract(22, 9) = {:?}", String::from_utf8_lossy(&snippet));
    Ok(())
}
