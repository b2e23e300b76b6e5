//! Print every level of a small tree: marked blocks and where pointers go.

use gamma_index::gamma_tree::BlockKind;
use gamma_index::{Index, Text};

fn main() -> gamma_index::Result<()> {
    let text = Text::try_from("abaababaabaababaababa")?;
    let index = Index::from_text(&text)?;
    let tree = index.tree();
    let padded = |start: usize, len: usize| -> String {
        (start..start + len)
            .map(|i| if i < text.len() { text[i] as char } else { '$' })
            .collect()
    };
    println!("text {:?}, attractor with sentinel {:?}", String::from_utf8_lossy(&text), tree.effective_attractor());
    for level in 0..tree.level_count() {
        print!("level {level}:");
        for b in tree.blocks(level) {
            let body = padded(b.start, b.len);
            match b.kind {
                BlockKind::Internal { .. } => print!(" [{body}]"),
                BlockKind::Symbol(_) => print!(" <{body}>"),
                BlockKind::Pointer { source_start, .. } => print!(" {body}->{source_start}"),
            }
        }
        println!();
    }
    let s = index.stats().tree;
    println!("w = {} leaves, {} explicit blocks (2w - γ' = {})", s.leaves, s.explicit_count, 2 * s.leaves - s.gamma);
    println!("leaf starts: {:?}", tree.leaf_starts());
    Ok(())
}
