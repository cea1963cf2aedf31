//! Built-in examples, each with the command-line outputs it is expected to
//! produce.
//!
//! Names: `example-5.5`, `findim-4-6`, `cone-2-3-unit-2`, `cone-2-3-unit-6`,
//! `free-product-2-3`, `quadratic-dyadic-sqrt2` and the family `uhf-<n>`
//! (the UHF diagram of `∏_{p | n} p^ω`).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::bratteli::{uhf_diagram, BratteliDiagram, Tail};
use crate::ordered_group::{CyclicOrderedGroup, OrderedGroup, QuadraticIrrationalGroup};
use crate::primes;
use crate::supernatural::{Exponent, SupernaturalNumber};

/// Largest prime factor accepted in `uhf-<n>`.
pub const UHF_MAX_PRIME: u64 = 1000;

#[derive(Debug, Clone)]
pub enum Payload {
    Diagram(BratteliDiagram),
    Group(OrderedGroup),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Diagram(_) => "diagram",
            Payload::Group(_) => "group",
        }
    }
}

/// One command line (without the program name) with its expected standard
/// output, parsed as JSON, and exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub args: Vec<String>,
    pub stdout: Value,
    pub status: i32,
    pub note: &'static str,
}

impl Expectation {
    fn new(args: &[&str], stdout: Value, status: i32, note: &'static str) -> Self {
        Self {
            args: args.iter().map(|s| s.to_string()).collect(),
            stdout,
            status,
            note,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"args": self.args, "stdout": self.stdout, "status": self.status, "note": self.note})
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub description: &'static str,
    pub payload: Payload,
    pub expected: Vec<Expectation>,
}

pub const STATIC_NAMES: [&str; 6] = [
    "example-5.5",
    "findim-4-6",
    "cone-2-3-unit-2",
    "cone-2-3-unit-6",
    "free-product-2-3",
    "quadratic-dyadic-sqrt2",
];

/// Static entries followed by a few members of the `uhf-<n>` family.
pub fn all() -> Vec<CatalogEntry> {
    STATIC_NAMES
        .iter()
        .chain(["uhf-2", "uhf-6", "uhf-10"].iter())
        .map(|n| lookup(n).expect("built-in name"))
        .collect()
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    let entry = match name {
        "example-5.5" => example(),
        "findim-4-6" => findim(),
        "cone-2-3-unit-2" => cone_unit_2(),
        "cone-2-3-unit-6" => cone_unit_6(),
        "free-product-2-3" => free_product(),
        "quadratic-dyadic-sqrt2" => quadratic(),
        _ => {
            let n: u64 = name.strip_prefix("uhf-")?.parse().ok()?;
            uhf(n)?
        }
    };
    Some(entry)
}

fn entry(
    name: &str,
    description: &'static str,
    payload: Payload,
    expected: Vec<Expectation>,
) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        description,
        payload,
        expected,
    }
}

fn diagram(name: &str, levels: &[usize], matrices: &[&[&[u64]]], tail: Tail) -> Payload {
    Payload::Diagram(
        BratteliDiagram::from_u64(levels, matrices, tail)
            .expect("catalog diagram is valid")
            .with_name(name),
    )
}

fn cyclic(generators: &[u64], unit: u64) -> Payload {
    Payload::Group(OrderedGroup::Cyclic(
        CyclicOrderedGroup::new(generators, unit).expect("catalog group is valid"),
    ))
}

fn example() -> CatalogEntry {
    let name = "example-5.5";
    let src = "catalog:example-5.5";
    entry(
        name,
        "two vertices per level joined by [[2,1],[1,2]]; heights 3^(n-1); maximal UHF subalgebra M_{3^inf}",
        diagram(name, &[1, 2, 2], &[&[&[1], &[1]], &[&[2, 1], &[1, 2]]], Tail::RepeatLast),
        vec![
            Expectation::new(
                &["mu", src, "--depth", "8"],
                json!({"mu": {"3": "inf"}, "exactness": "certified"}),
                0,
                "maximal UHF subalgebra is M_{3^inf}",
            ),
            Expectation::new(
                &["towers", src, "--depth", "4"],
                json!({
                    "depth": 4,
                    "heights": [[1], [1, 1], [3, 3], [9, 9], [27, 27]],
                    "gcds": [1, 1, 3, 9, 27],
                    "ratios": [1, 3, 3, 3],
                }),
                0,
                "tower gcds 1, 1, 3, 9, 27",
            ),
            Expectation::new(
                &["k0-divides", src, "--n", "9", "--depth", "6"],
                json!({"divides": true, "stage": 3, "vector": [1, 1]}),
                0,
                "9 x = [1] with x = (1,1) at level 3",
            ),
            Expectation::new(
                &["k0-divides", src, "--n", "2", "--depth", "6"],
                json!({"divides": false, "exactness": "certified"}),
                1,
                "2 never divides the unit",
            ),
            Expectation::new(
                &["embed", src, "--uhf", r#"{"3":"inf"}"#],
                json!({"embeds": "yes"}),
                0,
                "M_{3^inf} embeds unitally",
            ),
            Expectation::new(
                &["embed", src, "--uhf", r#"{"2":1}"#],
                json!({"embeds": "no-certified"}),
                1,
                "M_2 does not embed unitally",
            ),
            Expectation::new(
                &["theta", src, "--x", "1/3"],
                json!({"stage": 2, "vector": [1, 1]}),
                0,
                "theta(1/3) realized at level 2",
            ),
            Expectation::new(
                &["theta", src, "--x", "1/2"],
                json!({"defined": false, "exactness": "certified"}),
                1,
                "1/2 lies outside Q({3: inf})",
            ),
            Expectation::new(
                &["rsub", src, "--stage", "2", "--vector", "-2,-2"],
                json!({"member": true, "ratio": "-2/3", "stage": 2}),
                0,
                "3 g = -2 [1]",
            ),
            Expectation::new(
                &["divide", src, "--stage", "1", "--vector", "1,1", "--m", "3"],
                json!({"divides": true, "stage": 2, "vector": [1, 1]}),
                0,
                "(1,1) at level 1 is divisible by 3",
            ),
        ],
    )
}

fn findim() -> CatalogEntry {
    let name = "findim-4-6";
    let src = "catalog:findim-4-6";
    entry(
        name,
        "M_4 + M_6; maximal UHF subalgebra M_{gcd(4,6)} = M_2",
        diagram(name, &[1, 2], &[&[&[4], &[6]]], Tail::None),
        vec![
            Expectation::new(
                &["mu", src],
                json!({"mu": {"2": 1}, "exactness": "certified"}),
                0,
                "gcd(4, 6) = 2",
            ),
            Expectation::new(
                &["towers", src],
                json!({"depth": 1, "heights": [[1], [4, 6]], "gcds": [1, 2], "ratios": [2]}),
                0,
                "heights (4, 6)",
            ),
            Expectation::new(
                &["k0-divides", src, "--n", "2"],
                json!({"divides": true, "stage": 1, "vector": [2, 3]}),
                0,
                "2 (2,3) = (4,6)",
            ),
            Expectation::new(
                &["embed", src, "--uhf", r#"{"3":1}"#],
                json!({"embeds": "no-certified"}),
                1,
                "M_3 does not embed unitally",
            ),
        ],
    )
}

fn cone_unit_2() -> CatalogEntry {
    let src = "catalog:cone-2-3-unit-2";
    entry(
        "cone-2-3-unit-2",
        "Z with positive cone <2,3> and unit 2; Property (D) holds",
        cyclic(&[2, 3], 2),
        vec![
            Expectation::new(
                &["group", "propd", src],
                json!({"property_d": "holds"}),
                0,
                "no coprime pair of unit divisors",
            ),
            Expectation::new(
                &["group", "maxsn", src],
                json!({"max_supernatural": {}}),
                0,
                "only 1 divides the unit",
            ),
            Expectation::new(
                &["group", "divides", src, "--n", "2"],
                json!({"divides": false}),
                1,
                "1 is not in the cone",
            ),
        ],
    )
}

fn cone_unit_6() -> CatalogEntry {
    let src = "catalog:cone-2-3-unit-6";
    entry(
        "cone-2-3-unit-6",
        "Z with positive cone <2,3> and unit 6; 2 | 6 and 3 | 6 but 6 does not divide 6",
        cyclic(&[2, 3], 6),
        vec![
            Expectation::new(
                &["group", "propd", src],
                json!({"property_d": "fails", "counterexample": [2, 3]}),
                1,
                "2 | 6 and 3 | 6 but 6 does not divide 6",
            ),
            Expectation::new(
                &["group", "divides", src, "--n", "2"],
                json!({"divides": true, "quotient": 3}),
                0,
                "6 = 2 * 3",
            ),
            Expectation::new(
                &["group", "divides", src, "--n", "6"],
                json!({"divides": false}),
                1,
                "1 is not in the cone",
            ),
        ],
    )
}

fn free_product() -> CatalogEntry {
    let src = "catalog:free-product-2-3";
    entry(
        "free-product-2-3",
        "(Z, <2,3>, 6), the ordered K_0 of the unital free product of M_2 and M_3; no maximal UHF supernatural number",
        cyclic(&[2, 3], 6),
        vec![
            Expectation::new(&["group", "maxsn", src], json!({"max_supernatural": null}), 1, "Property (D) fails"),
            Expectation::new(
                &["group", "rsub", src, "--element", "5"],
                json!({"member": true, "ratio": "5/6"}),
                0,
                "6 * 5 = 5 * 6",
            ),
        ],
    )
}

fn quadratic() -> CatalogEntry {
    let src = "catalog:quadratic-dyadic-sqrt2";
    let h = SupernaturalNumber::prime_power_omega(2).expect("2 is prime");
    let g = QuadraticIrrationalGroup::new(
        h,
        2,
        BigRational::from_integer(BigInt::from(1)),
        BigInt::from(0),
    )
    .expect("catalog group is valid");
    entry(
        "quadratic-dyadic-sqrt2",
        "Z[1/2] + sqrt(2) Z ordered as a subgroup of R, unit 1; its rational subgroup is Z[1/2]",
        Payload::Group(OrderedGroup::Quadratic(g)),
        vec![
            Expectation::new(
                &["group", "maxsn", src],
                json!({"max_supernatural": {"2": "inf"}}),
                0,
                "N = 2^inf",
            ),
            Expectation::new(
                &["group", "propd", src],
                json!({"property_d": "holds"}),
                0,
                "totally ordered",
            ),
            Expectation::new(
                &["group", "rsub", src, "--element", "3/4,0"],
                json!({"member": true, "ratio": "3/4"}),
                0,
                "dyadic rationals are rational",
            ),
            Expectation::new(
                &["group", "rsub", src, "--element", "1/2,1"],
                json!({"member": false}),
                1,
                "nonzero sqrt(2) part",
            ),
            Expectation::new(
                &["group", "divides", src, "--n", "8"],
                json!({"divides": true, "quotient": {"q": "1/8", "z": 0}}),
                0,
                "1/8 is dyadic",
            ),
            Expectation::new(
                &["group", "divides", src, "--n", "3"],
                json!({"divides": false}),
                1,
                "1/3 is not dyadic",
            ),
        ],
    )
}

/// `uhf-<n>` for `n ≥ 1` whose prime factors are at most [`UHF_MAX_PRIME`].
fn uhf(n: u64) -> Option<CatalogEntry> {
    if n == 0 {
        return None;
    }
    let support: Vec<BigUint> = primes::factorize(&BigUint::from(n)).into_keys().collect();
    let largest = support
        .last()
        .map_or(1, |p| p.to_u64().expect("divides a u64"));
    if largest > UHF_MAX_PRIME {
        return None;
    }
    let index = primes::first_primes(UHF_MAX_PRIME as usize)
        .iter()
        .position(|&p| p == largest)
        .map_or(0, |i| i + 1);
    let target =
        SupernaturalNumber::from_prime_powers(support.iter().map(|p| (p.clone(), Exponent::Omega)))
            .expect("prime support");
    let name = format!("uhf-{n}");
    let d = uhf_diagram(&target, index + 1)
        .expect("stages ≥ 1")
        .with_name(name.clone());
    let src = format!("catalog:{name}");
    let mu = crate::format::sn_to_json(&target);
    let mut expected = vec![Expectation {
        args: vec!["mu".into(), src.clone()],
        stdout: json!({"mu": mu, "exactness": "certified"}),
        status: 0,
        note: "the UHF algebra is its own maximal UHF subalgebra",
    }];
    if let Some(p) = support.first() {
        expected.push(Expectation {
            args: vec![
                "embed".into(),
                src,
                "--uhf".into(),
                format!("{{\"{p}\":2}}"),
            ],
            stdout: json!({"embeds": "yes"}),
            status: 0,
            note: "M_{p^2} embeds for every p | n",
        });
    }
    Some(CatalogEntry {
        name,
        description: "single vertex per level, UHF algebra of type prod_{p | n} p^inf",
        payload: Payload::Diagram(d),
        expected,
    })
}
