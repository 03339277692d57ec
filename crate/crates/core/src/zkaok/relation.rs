use serde::{Deserialize, Serialize};

use crate::bpk::{validate_left, LeftPublicKey, LeftSecretKey};
use crate::params::Params;
use crate::primitives::{naor_verify_string, BitString, Elem, Exponent};
use crate::sigma::{SigmaStatement, SigmaWitness};

/// Statement of an argument of knowledge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "relation")]
pub enum AokStatement {
    /// `c_sk` commits (under `receiver_string`) to a preimage of `y0` or `y1`.
    #[serde(rename = "L_SK")]
    Sk { y0: Elem, y1: Elem, receiver_string: BitString, c_sk: Vec<BitString> },
    /// `c_crs` commits (under the left key's receiver string) to `x` such
    /// that either `x = sigma || s_sigma` opens `PK_L` and
    /// `PRF_sigma(r'_l) = r xor r_r`, or the first n bits of `x` open `y0`
    /// or `y1`.
    #[serde(rename = "L_CRS")]
    Crs {
        pk_left: LeftPublicKey,
        r_prime_l: BitString,
        r_r: BitString,
        r: BitString,
        y0: Elem,
        y1: Elem,
        c_crs: Vec<BitString>,
    },
    #[serde(rename = "sigma")]
    Sigma { statement: SigmaStatement },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation")]
pub enum AokWitness {
    #[serde(rename = "L_SK")]
    Sk { sk_bits: BitString, seeds: Vec<BitString> },
    #[serde(rename = "L_CRS")]
    Crs { x: BitString, seeds: Vec<BitString> },
    #[serde(rename = "sigma")]
    Sigma { witness: SigmaWitness },
}

impl AokStatement {
    pub fn relation_id(&self) -> &'static str {
        match self {
            AokStatement::Sk { .. } => "L_SK",
            AokStatement::Crs { .. } => "L_CRS",
            AokStatement::Sigma { .. } => "sigma",
        }
    }

    /// The part a Sigma protocol can prove directly, if any. For `L_SK` this is
    /// knowledge of a preimage of `y0` or `y1`; `L_CRS` has none.
    pub fn sigma_core(&self) -> Option<SigmaStatement> {
        match self {
            AokStatement::Sk { y0, y1, .. } => {
                Some(SigmaStatement::or(SigmaStatement::dlog(y0.clone()), SigmaStatement::dlog(y1.clone())))
            }
            AokStatement::Crs { .. } => None,
            AokStatement::Sigma { statement } => Some(statement.clone()),
        }
    }
}

impl AokWitness {
    /// Witness for [`AokStatement::sigma_core`].
    pub fn sigma_core(&self, params: &Params, stmt: &AokStatement) -> Option<SigmaWitness> {
        match (self, stmt) {
            (AokWitness::Sk { sk_bits, .. }, AokStatement::Sk { y0, .. }) => {
                let x = Exponent::new(sk_bits.to_biguint());
                let leaf = SigmaWitness::DLog { x: x.clone() };
                Some(if &params.group.exp_g(&x) == y0 { SigmaWitness::left(leaf) } else { SigmaWitness::right(leaf) })
            }
            (AokWitness::Sigma { witness }, AokStatement::Sigma { .. }) => Some(witness.clone()),
            _ => None,
        }
    }
}

/// Membership test by recomputation. Total: malformed input is `false`.
pub fn eval_relation(params: &Params, stmt: &AokStatement, w: &AokWitness) -> bool {
    let n = params.n;
    let prg = params.prg();
    match (stmt, w) {
        (AokStatement::Sk { y0, y1, receiver_string, c_sk }, AokWitness::Sk { sk_bits, seeds }) => {
            sk_bits.len() == n
                && receiver_string.len() == 3 * n
                && seeds.iter().all(|s| s.len() == n)
                && naor_verify_string(&prg, receiver_string, c_sk, sk_bits, seeds)
                && opens_one(params, sk_bits, y0, y1)
        }
        (AokStatement::Crs { pk_left, r_prime_l, r_r, r, y0, y1, c_crs }, AokWitness::Crs { x, seeds }) => {
            if x.len() != params.left_secret_bits()
                || pk_left.receiver_string.len() != 3 * n
                || !seeds.iter().all(|s| s.len() == n)
                || !naor_verify_string(&prg, &pk_left.receiver_string, c_crs, x, seeds)
            {
                return false;
            }
            let (head, _) = x.split_at(n);
            opens_one(params, &head, y0, y1) || left_branch(params, pk_left, x, r_prime_l, r_r, r)
        }
        (AokStatement::Sigma { statement }, AokWitness::Sigma { witness }) => {
            statement.is_satisfied_by(&params.group, witness)
        }
        _ => false,
    }
}

fn opens_one(params: &Params, bits: &BitString, y0: &Elem, y1: &Elem) -> bool {
    let x = bits.to_biguint();
    if &x >= params.group.q() {
        return false;
    }
    let y = params.group.exp_g(&Exponent::new(x));
    &y == y0 || &y == y1
}

fn left_branch(
    params: &Params,
    pk_left: &LeftPublicKey,
    x: &BitString,
    r_prime_l: &BitString,
    r_r: &BitString,
    r: &BitString,
) -> bool {
    let Ok(sk) = LeftSecretKey::from_bits(x, params.n) else {
        return false;
    };
    if !validate_left(params, pk_left, &sk) {
        return false;
    }
    let Ok(expected) = r.xor(r_r) else {
        return false;
    };
    params.prf().eval(&sk.sigma, r_prime_l).map(|v| v == expected).unwrap_or(false)
}
