use proptest::prelude::*;

use scodes::codefile::{parse_code, parse_packing, write_code, write_packing};
use scodes_core::constructions::{find_parallelism, lifted_mrd, partial_spread, Cdc};
use scodes_core::gfq::FieldSpec;
use scodes_core::spaces::MatGF;

fn round_trip(c: &Cdc) {
    let text = write_code(c).unwrap();
    let back = parse_code(&text).unwrap();
    assert_eq!((back.n(), back.k(), back.d()), (c.n(), c.k(), c.d()));
    assert_eq!(back.words(), c.words());
    assert_eq!(write_code(&back).unwrap(), text);
}

#[test]
fn round_trips_over_several_fields() {
    round_trip(&lifted_mrd(&FieldSpec::of_order(2).unwrap(), 6, 3, 4).unwrap());
    round_trip(&partial_spread(&FieldSpec::of_order(3).unwrap(), 5, 2).unwrap());
    let f4 = FieldSpec::of_order(4).unwrap();
    let c = lifted_mrd(&f4, 4, 2, 4).unwrap();
    let text = write_code(&c).unwrap();
    assert!(text.lines().nth(1).unwrap().contains("mod=1,1,1"));
    round_trip(&c);
    round_trip(&lifted_mrd(&FieldSpec::of_order(9).unwrap(), 4, 2, 2).unwrap());
}

#[test]
fn packings_round_trip() {
    let f = FieldSpec::of_order(2).unwrap();
    let p = find_parallelism(&f, 4, 2).unwrap().into_packing();
    let text = write_packing(&p);
    assert!(text.contains("outer=2"));
    assert!(text.contains("part=6"));
    assert_eq!(parse_packing(&text).unwrap(), p);
}

#[test]
fn comments_and_errors() {
    let ok = "# a comment\nSCODE 1\n# another\nq=2 p=2 e=1 n=3 k=1 d=2 count=2\n1 0 0\n\n# between words\n0 1 1\n";
    assert_eq!(parse_code(ok).unwrap().words().unwrap().len(), 2);
    let bad = [
        ("SCODE 2\n", "SCODE 1"),
        ("SCODE 1\nq=4 p=2 e=2 n=2 k=1 d=2 count=0\n", "mod="),
        ("SCODE 1\nq=2 p=2 e=1 n=2 k=1 d=2 count=1\n1 2\n", "[0,2)"),
        ("SCODE 1\nq=2 p=2 e=1 n=2 k=2 d=2 count=1\n1 1\n1 1\n", "rank"),
        ("SCODE 1\nq=2 p=2 e=1 n=2 k=1 d=2 count=2\n1 1\n\n1 1\n", "repeated"),
        ("SCODE 1\nq=6 p=2 e=1 n=2 k=1 d=2 count=0\n", "p^e"),
        ("SCODE 1\nq=2 p=2 e=1 n=2 k=1 d=2 count=1 outer=2\n1 1\n", "outer"),
        ("SCODE 1\nq=2 p=2 e=1 n=2 k=1 d=2 count=1\n1 1 0\n", "expected n=2"),
    ];
    for (text, want) in bad {
        let e = parse_code(text).unwrap_err().to_string();
        assert!(e.contains(want), "{text:?}: {e}");
    }
}

proptest! {
    #[test]
    fn random_codes_round_trip(q in prop::sample::select(vec![2u64, 3, 4, 5]), data in prop::collection::vec(any::<u32>(), 60)) {
        let f = FieldSpec::of_order(q).unwrap();
        let mut words = Vec::new();
        for chunk in data.chunks(12) {
            let m = MatGF::new(&f, 2, 6, chunk.iter().map(|x| x % f.q()).collect()).unwrap();
            let u = m.row_space();
            if u.k() == 2 && !words.contains(&u) {
                words.push(u);
            }
        }
        let c = Cdc::from_words(&f, 6, 2, 2, words, "random").unwrap();
        let text = write_code(&c).unwrap();
        let back = parse_code(&text).unwrap();
        prop_assert_eq!(back.words(), c.words());
    }
}
