use std::collections::BTreeMap;

use rand::SeedableRng;

use super::*;

fn toy() -> GroupParams {
    GroupParams::toy()
}

fn modpow(b: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1, |acc, _| acc * b % m)
}

fn dlog_z(r: &Response) -> u64 {
    match r {
        Response::DLog { z } => z.to_u64().unwrap(),
        other => panic!("not a leaf response: {other:?}"),
    }
}

#[test]
fn schnorr_worked_example() {
    let g = toy();
    let stmt = SigmaStatement::dlog(Elem::from(8));
    let w = SigmaWitness::DLog { x: Exponent::from(3) };
    let (a, mut st) = sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([4])).unwrap();
    assert_eq!(a, FirstMessage::DLog { a: Elem::from(16) });
    let z = sigma_respond(&mut st, &Challenge::from(5)).unwrap();
    assert_eq!(dlog_z(&z), 8);
    // Both sides of g^z = a * y^e evaluate to 3.
    assert_eq!(modpow(2, 8, 23), 3);
    assert_eq!(16 * modpow(8, 5, 23) % 23, 3);
    let t = SigmaTranscript::new(a, Challenge::from(5), z);
    assert_eq!(sigma_verify(&g, &stmt, &t), Ok(()));
}

#[test]
fn zero_nonce_and_zero_challenge() {
    let g = toy();
    let stmt = SigmaStatement::dlog(Elem::from(8));
    let w = SigmaWitness::DLog { x: Exponent::from(3) };
    let (a, _) = sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([0])).unwrap();
    assert_eq!(a, FirstMessage::DLog { a: Elem::from(1) });
    let (_, mut st) = sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([7])).unwrap();
    assert_eq!(dlog_z(&st.respond(&Challenge::from(0)).unwrap()), 7);
}

#[test]
fn state_is_single_use() {
    let g = toy();
    let stmt = SigmaStatement::dlog(Elem::from(8));
    let w = SigmaWitness::DLog { x: Exponent::from(3) };
    let (_, mut st) = sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([4])).unwrap();
    st.respond(&Challenge::from(1)).unwrap();
    assert!(st.is_consumed());
    assert_eq!(st.respond(&Challenge::from(1)), Err(Error::StateConsumed));
}

#[test]
fn wrong_witness_is_refused() {
    let g = toy();
    let stmt = SigmaStatement::dlog(Elem::from(8));
    let w = SigmaWitness::DLog { x: Exponent::from(4) };
    assert!(matches!(sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([1])), Err(Error::WitnessMismatch)));
    let w = SigmaWitness::left(SigmaWitness::DLog { x: Exponent::from(3) });
    assert!(matches!(sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([1])), Err(Error::WitnessMismatch)));
}

#[test]
fn flipped_response_bit_rejects() {
    let g = toy();
    let stmt = SigmaStatement::dlog(Elem::from(8));
    for bit in 0..4 {
        let z = 8u64 ^ (1 << bit);
        let t = SigmaTranscript::new(FirstMessage::DLog { a: Elem::from(16) }, Challenge::from(5), Response::DLog { z: Exponent::from(z) });
        // Recompute oracle: accept iff 2^z == 16 * 8^5 mod 23.
        let expect_ok = z < 11 && modpow(2, z, 23) == 16 * modpow(8, 5, 23) % 23;
        assert!(!expect_ok);
        assert!(sigma_verify(&g, &stmt, &t).is_err());
    }
}

#[test]
fn or_simulated_half_verifies_standalone() {
    let g = toy();
    let stmt = SigmaStatement::or(SigmaStatement::dlog(Elem::from(8)), SigmaStatement::dlog(Elem::from(13)));
    let w = SigmaWitness::left(SigmaWitness::DLog { x: Exponent::from(3) });
    let mut coins = FixedCoins::new([4, 9], [6]);
    let (a, mut st) = sigma_commit(&g, &stmt, &w, &mut coins).unwrap();
    let e = Challenge::from(3);
    let z = st.respond(&e).unwrap();
    let t = SigmaTranscript::new(a, e.clone(), z);
    let (l, r) = t.children().unwrap();
    assert_eq!(r.e, Challenge::from(6));
    assert_eq!(sigma_verify(&g, &SigmaStatement::dlog(Elem::from(13)), &r), Ok(()));
    assert_eq!(l.e.xor(&r.e), e);
    assert_eq!(sigma_verify(&g, &stmt, &t), Ok(()));
}

#[test]
fn or_with_wrong_parent_challenge_rejects() {
    let g = toy();
    let stmt = SigmaStatement::or(SigmaStatement::dlog(Elem::from(8)), SigmaStatement::dlog(Elem::from(13)));
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(1);
    let mut t = sigma_simulate(&g, &stmt, &Challenge::from(5), &mut rng);
    assert_eq!(sigma_verify(&g, &stmt, &t), Ok(()));
    t.e = Challenge::from(4);
    assert_eq!(sigma_verify(&g, &stmt, &t), Err(RejectReason::EquationFailed));
    t.e = Challenge::from(8);
    assert_eq!(sigma_verify(&g, &stmt, &t), Err(RejectReason::ChallengeOutOfRange));
}

#[test]
fn simulator_needs_no_witness() {
    let g = toy();
    let h = Elem::from(8);
    // Two Pedersen statements; the simulator is never asked for an opening.
    let stmt = SigmaStatement::or(SigmaStatement::pedersen(h.clone(), Elem::from(16)), SigmaStatement::pedersen(h, Elem::from(5)));
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(2);
    for e in 0..8 {
        let t = sigma_simulate(&g, &stmt, &Challenge::from(e), &mut rng);
        assert_eq!(sigma_verify(&g, &stmt, &t), Ok(()));
    }
    // Leaf outside the order-q subgroup: 22 = -1 mod 23.
    let odd = SigmaStatement::dlog(Elem::from(22));
    for e in 0..11 {
        let t = sigma_simulate(&g, &odd, &Challenge::from(e), &mut rng);
        assert_eq!(sigma_verify(&g, &odd, &t), Ok(()));
    }
}

#[test]
fn extractor_worked_example() {
    let g = toy();
    let stmt = SigmaStatement::dlog(Elem::from(8));
    let t1 = SigmaTranscript::new(FirstMessage::DLog { a: Elem::from(16) }, Challenge::from(5), Response::DLog { z: Exponent::from(8) });
    let t2 = SigmaTranscript::new(FirstMessage::DLog { a: Elem::from(16) }, Challenge::from(2), Response::DLog { z: Exponent::from(10) });
    // (8 - 10) * 3^{-1} mod 11 = 9 * 4 mod 11 = 3
    assert_eq!((11 + 8 - 10) * 4 % 11, 3);
    assert_eq!(sigma_extract(&g, &stmt, &t1, &t2), Ok(SigmaWitness::DLog { x: Exponent::from(3) }));
    assert!(matches!(sigma_extract(&g, &stmt, &t1, &t1), Err(Error::Extraction(_))));
    let mut bad = t2.clone();
    bad.z = Response::DLog { z: Exponent::from(9) };
    assert!(matches!(sigma_extract(&g, &stmt, &t1, &bad), Err(Error::Precondition(_))));
}

#[test]
fn or_extraction_follows_the_differing_child() {
    let g = toy();
    let stmt = SigmaStatement::or(SigmaStatement::dlog(Elem::from(8)), SigmaStatement::dlog(Elem::from(13)));
    // 2^7 = 13 mod 23
    let w = SigmaWitness::right(SigmaWitness::DLog { x: Exponent::from(7) });
    let run = |e: u64| {
        let mut coins = FixedCoins::new([5, 2], [3]);
        let (a, mut st) = sigma_commit(&g, &stmt, &w, &mut coins).unwrap();
        let z = st.respond(&Challenge::from(e)).unwrap();
        SigmaTranscript::new(a, Challenge::from(e), z)
    };
    let (t1, t2) = (run(1), run(6));
    assert_eq!(t1.children().unwrap().0.e, t2.children().unwrap().0.e);
    assert_eq!(sigma_extract(&g, &stmt, &t1, &t2), Ok(w));
}

#[test]
fn exhaustive_completeness_and_soundness() {
    let g = toy();
    for x in 0..11u64 {
        let y = Elem::from(modpow(2, x, 23));
        let stmt = SigmaStatement::dlog(y);
        let w = SigmaWitness::DLog { x: Exponent::from(x) };
        for k in 0..11u64 {
            let transcripts: Vec<_> = (0..11u64)
                .map(|e| {
                    let (a, mut st) = sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([k])).unwrap();
                    let z = st.respond(&Challenge::from(e)).unwrap();
                    assert_eq!(dlog_z(&z), (k + e * x) % 11);
                    SigmaTranscript::new(a, Challenge::from(e), z)
                })
                .collect();
            for t in &transcripts {
                assert_eq!(sigma_verify(&g, &stmt, t), Ok(()));
            }
            for (i, t1) in transcripts.iter().enumerate() {
                for t2 in &transcripts[i + 1..] {
                    assert_eq!(sigma_extract(&g, &stmt, t1, t2).unwrap(), w);
                }
            }
        }
    }
}

#[test]
fn exhaustive_pedersen_completeness_and_soundness() {
    let g = toy();
    let h = Elem::from(8);
    for (m, r) in [(0u64, 0u64), (3, 4), (10, 1), (6, 9)] {
        let com = Elem::from(modpow(2, m, 23) * modpow(8, r, 23) % 23);
        let stmt = SigmaStatement::pedersen(h.clone(), com);
        let w = SigmaWitness::Pedersen { m: Exponent::from(m), r: Exponent::from(r) };
        for k in 0..11u64 {
            let run = |e: u64| {
                let (a, mut st) = sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([k, 10 - k])).unwrap();
                SigmaTranscript::new(a, Challenge::from(e), st.respond(&Challenge::from(e)).unwrap())
            };
            let ts: Vec<_> = (0..11).map(run).collect();
            for t in &ts {
                assert_eq!(sigma_verify(&g, &stmt, t), Ok(()));
            }
            assert_eq!(sigma_extract(&g, &stmt, &ts[0], &ts[10]).unwrap(), w);
        }
    }
}

#[test]
fn exhaustive_perfect_shvzk() {
    let g = toy();
    for x in 0..11u64 {
        let stmt = SigmaStatement::dlog(Elem::from(modpow(2, x, 23)));
        let w = SigmaWitness::DLog { x: Exponent::from(x) };
        for e in 0..11u64 {
            let mut real = BTreeMap::new();
            let mut sim = BTreeMap::new();
            for coin in 0..11u64 {
                let (a, mut st) = sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([coin])).unwrap();
                let z = st.respond(&Challenge::from(e)).unwrap();
                *real.entry(SigmaTranscript::new(a, Challenge::from(e), z)).or_insert(0) += 1;
                let t = sigma_simulate(&g, &stmt, &Challenge::from(e), &mut FixedCoins::exponents([coin]));
                *sim.entry(t).or_insert(0) += 1;
            }
            assert_eq!(real, sim, "x={x} e={e}");
        }
    }
}

#[test]
fn exhaustive_or_witness_indistinguishability() {
    let g = toy();
    let (x0, x1) = (3u64, 7u64);
    let stmt = SigmaStatement::or(
        SigmaStatement::dlog(Elem::from(modpow(2, x0, 23))),
        SigmaStatement::dlog(Elem::from(modpow(2, x1, 23))),
    );
    let wl = SigmaWitness::left(SigmaWitness::DLog { x: Exponent::from(x0) });
    let wr = SigmaWitness::right(SigmaWitness::DLog { x: Exponent::from(x1) });
    let views = |w: &SigmaWitness, e: u64| {
        let mut out = BTreeMap::new();
        for k in 0..11u64 {
            for c in 0..8u64 {
                for zs in 0..11u64 {
                    let (a, mut st) = sigma_commit(&g, &stmt, w, &mut FixedCoins::new([k, zs], [c])).unwrap();
                    let z = st.respond(&Challenge::from(e)).unwrap();
                    *out.entry(SigmaTranscript::new(a, Challenge::from(e), z)).or_insert(0) += 1;
                }
            }
        }
        out
    };
    for e in 0..8 {
        assert_eq!(views(&wl, e), views(&wr, e), "e={e}");
    }
}


#[test]
fn or3_bookkeeping_flattens_xor() {
    let leaf = |e: u64| SigmaTranscript::new(
        FirstMessage::DLog { a: Elem::from(1) },
        Challenge::from(e),
        Response::DLog { z: Exponent::from(0) },
    );
    let e = Challenge::from(0x5a);
    let (ex, ec) = (0x13u64, 0x2fu64);
    // The middle branch gets whatever is left over.
    let ev = Challenge::from(0x5a ^ ex ^ ec);
    assert_eq!(ev, Challenge::from(0x66));
    let t = SigmaTranscript::assemble_or3(&e, leaf(ex), leaf(0x66), leaf(ec)).unwrap();
    let [a, b, c] = t.split_or3().unwrap();
    assert_eq!((a.e, b.e, c.e), (Challenge::from(ex), Challenge::from(0x66), Challenge::from(ec)));
    assert!(SigmaTranscript::assemble_or3(&e, leaf(ex), leaf(0x67), leaf(ec)).is_err());
}

#[test]
fn canonical_json_is_tagged_depth_first() {
    let t = SigmaTranscript::or(
        SigmaTranscript::new(FirstMessage::DLog { a: Elem::from(16) }, Challenge::from(1), Response::DLog { z: Exponent::from(3) }),
        SigmaTranscript::new(FirstMessage::DLog { a: Elem::from(2) }, Challenge::from(2), Response::DLog { z: Exponent::from(4) }),
    );
    let json = serde_json::to_string(&t).unwrap();
    assert_eq!(
        json,
        r#"{"a":{"type":"or","left":{"type":"d-log","a":"16"},"right":{"type":"d-log","a":"2"}},"e":"3","z":{"type":"or","left_challenge":"1","left":{"type":"d-log","z":"3"},"right":{"type":"d-log","z":"4"}}}"#
    );
}
