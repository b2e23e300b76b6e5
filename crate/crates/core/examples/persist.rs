//! Save an index, load it back and check that it answers the same.

use gamma_index::{Index, IndexBuilder, Text};

fn main() -> gamma_index::Result<()> {
    let text = Text::new(gamma_index::corpus::mutated_copies(20, 2_000, 0.005, 4, 7)?)?;
    let index = IndexBuilder::new().seed(42).build_lz77(&text)?;

    let dir = std::env::temp_dir().join("gamma-index-persist-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("corpus.gidx");
    index.save(&path)?;
    let loaded = Index::load(&path)?;

    let pattern = &text[1234..1250];
    assert_eq!(loaded.locate(pattern)?, index.locate(pattern)?);
    assert_eq!(loaded.to_bytes(), std::fs::read(&path)?);
    println!("{} bytes for a text of {}; {} hits for the probe", std::fs::metadata(&path)?.len(), text.len(), loaded.count(pattern)?);

    let mut damaged = std::fs::read(&path)?;
    damaged[100] ^= 0xff;
    match Index::from_bytes(&damaged) {
        Err(e) => println!("damaged copy rejected: {e}"),
        Ok(_) => unreachable!("checksum must catch a flipped byte"),
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
