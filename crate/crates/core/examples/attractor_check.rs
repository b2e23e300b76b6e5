//! LZ77 parse, the attractor it induces, and the brute-force validator.

use gamma_index::attractor::{attractor_from_lz77, lz77_parse, validate_attractor, Attractor};
use gamma_index::Text;

fn main() -> gamma_index::Result<()> {
    let text = Text::try_from("abaababaabaab")?;
    let parse = lz77_parse(&text);
    for phrase in parse.phrases() {
        match (phrase.source, phrase.literal) {
            (Some(src), lit) => println!("copy {} from {src}, then {:?}", phrase.copy_len, lit.map(char::from)),
            (None, lit) => println!("literal {:?}", lit.map(char::from)),
        }
    }
    assert_eq!(parse.decode(), text.as_bytes());

    let gamma = attractor_from_lz77(&parse, &text);
    println!("attractor {:?} (γ = {})", gamma.positions(), gamma.gamma());
    println!("valid: {}", validate_attractor(&text, &gamma).valid);

    // dropping positions eventually leaves some substring uncovered
    let thin = Attractor::new(vec![2], text.len())?;
    let v = validate_attractor(&text, &thin);
    if let Some(w) = v.witness {
        println!("{{2}} fails: {:?} never crosses it", String::from_utf8_lossy(&text[w]));
    }
    Ok(())
}
