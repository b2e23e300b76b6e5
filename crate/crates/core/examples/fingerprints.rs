//! Karp–Rabin fingerprints of arbitrary substrings, read from the tree.

use gamma_index::{Index, KrFunction, Text};

fn main() -> gamma_index::Result<()> {
    let text = Text::new(gamma_index::corpus::fibonacci(12)?)?;
    let index = Index::from_text(&text)?;
    let kr = *index.tree().kr();
    println!("q = {}, r = {}", kr.modulus(), kr.base());

    let (a, b) = (30, 75);
    let fp = index.substring_fingerprint(a, b)?;
    assert_eq!(fp, kr.of_string(&text[a..b]));
    println!("φ(S[{a}..{b})) = {:#x}", fp.hash);

    // equal substrings, equal fingerprints; a collision-free function makes
    // the converse hold for power-of-two lengths
    let (x, y) = (0, 55);
    let same = index.substring_fingerprint(x, x + 21)? == index.substring_fingerprint(y, y + 21)?;
    println!("S[{x}..+21] == S[{y}..+21]: {same} (text says {})", text[x..x + 21] == text[y..y + 21]);

    // the extended form composes
    let f = KrFunction::new(2, 7)?;
    let (u, v) = (f.of_string(b"attrac"), f.of_string(b"tor"));
    let uv = f.concat(u, v);
    assert_eq!(uv, f.of_string(b"attractor"));
    assert_eq!(f.split_left(uv, v), u);
    assert_eq!(f.split_right(uv, u), v);
    println!("concat / split round trip ok");
    Ok(())
}
