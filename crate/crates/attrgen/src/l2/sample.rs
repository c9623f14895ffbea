//! Random inputs for generated programs.
//!
//! Integers are uniform on [-5, 15], booleans uniform with both values
//! guaranteed across an example set, and lists get a uniform length on
//! [0, 5] with elements sampled independently and recursively.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::expr::{Expr, L2Value};
use super::interp::evaluate_expr;
use super::types::L2Type;

pub const INT_LO: i64 = -5;
pub const INT_HI: i64 = 15;
pub const LIST_LEN_MAX: usize = 5;

#[derive(Debug, PartialEq, Eq)]
pub enum SampleError {
    FunctionInput,
}

impl fmt::Display for SampleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleError::FunctionInput => write!(f, "cannot sample a function-typed input"),
        }
    }
}

impl std::error::Error for SampleError {}

/// One random value of the given first-order type.
pub fn sample_input(ty: &L2Type, rng: &mut ChaCha8Rng) -> Result<L2Value, SampleError> {
    match ty {
        L2Type::Int => Ok(L2Value::Int(rng.random_range(INT_LO..=INT_HI))),
        L2Type::Bool => Ok(L2Value::Bool(rng.random())),
        L2Type::List(elem) => {
            let len = rng.random_range(0..=LIST_LEN_MAX);
            let mut items = Vec::with_capacity(len);
            for _ in 0..len {
                items.push(sample_input(elem, rng)?);
            }
            Ok(L2Value::List(items))
        }
        L2Type::Fun(..) => Err(SampleError::FunctionInput),
    }
}

/// Argument types offered to the corpus signature sampler. First-order only;
/// nesting deeper than two levels is not drawn (the engine itself accepts
/// arbitrary types).
const TYPE_MENU: [fn() -> L2Type; 5] = [
    || L2Type::Int,
    || L2Type::Bool,
    || L2Type::list(L2Type::Int),
    || L2Type::list(L2Type::Bool),
    || L2Type::list(L2Type::list(L2Type::Int)),
];

/// Random program signature: 1..=3 argument types plus a return type.
/// Combinations that admit no non-trivial program are resampled: a
/// list-returning signature needs a list argument (lists have no literals),
/// and an int-returning signature needs a non-bool argument (booleans never
/// flow into integers).
pub fn sample_signature(rng: &mut ChaCha8Rng) -> (Vec<L2Type>, L2Type) {
    loop {
        let n_args = rng.random_range(1..=3);
        let args: Vec<L2Type> =
            (0..n_args).map(|_| TYPE_MENU[rng.random_range(0..TYPE_MENU.len())]()).collect();
        let ret = TYPE_MENU[rng.random_range(0..TYPE_MENU.len())]();
        if ret.is_list() && !args.iter().any(L2Type::is_list) {
            continue;
        }
        if ret == L2Type::Int && args.iter().all(|t| *t == L2Type::Bool) {
            continue;
        }
        return (args, ret);
    }
}

/// Samples `count` runtime-clean examples for `program` (a lambda with known
/// argument types). Inputs that trigger a runtime error are resampled up to
/// a bound; `None` when not enough clean examples exist or when boolean
/// argument coverage cannot be established.
pub fn generate_examples_expr(
    program: &Expr,
    arg_types: &[L2Type],
    count: usize,
    fuel: u64,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<(Vec<L2Value>, L2Value)>> {
    if count == 0 {
        return Some(Vec::new());
    }
    let mut examples: Vec<(Vec<L2Value>, L2Value)> = Vec::with_capacity(count);
    let budget = count * 50 + 20;
    let mut spent = 0;
    while examples.len() < count {
        if spent >= budget {
            return None;
        }
        spent += 1;
        let mut inputs = Vec::with_capacity(arg_types.len());
        for ty in arg_types {
            inputs.push(sample_input(ty, rng).ok()?);
        }
        match evaluate_expr(program, &inputs, fuel) {
            Ok(output) if !output.is_closure() => examples.push((inputs, output)),
            _ => {}
        }
    }
    // Both boolean values must appear for every bool argument.
    for (i, ty) in arg_types.iter().enumerate() {
        if *ty != L2Type::Bool {
            continue;
        }
        let first = examples[0].0[i].clone();
        if examples.iter().any(|(inputs, _)| inputs[i] != first) {
            continue;
        }
        let flipped_value = match first {
            L2Value::Bool(b) => L2Value::Bool(!b),
            _ => return None,
        };
        let mut fixed = false;
        for ex in examples.iter_mut() {
            let mut inputs = ex.0.clone();
            inputs[i] = flipped_value.clone();
            if let Ok(output) = evaluate_expr(program, &inputs, fuel) {
                if !output.is_closure() {
                    *ex = (inputs, output);
                    fixed = true;
                    break;
                }
            }
        }
        if !fixed {
            return None;
        }
    }
    Some(examples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn int_samples_stay_in_range_and_cover_it() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..10_000 {
            match sample_input(&L2Type::Int, &mut rng).unwrap() {
                L2Value::Int(n) => {
                    assert!((INT_LO..=INT_HI).contains(&n));
                    seen.insert(n);
                }
                _ => panic!("expected int"),
            }
        }
        assert_eq!(seen.len(), 21, "all 21 integer values observed");
    }

    #[test]
    fn list_lengths_stay_in_range_and_cover_it() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..10_000 {
            match sample_input(&L2Type::list(L2Type::Int), &mut rng).unwrap() {
                L2Value::List(items) => {
                    assert!(items.len() <= LIST_LEN_MAX);
                    seen.insert(items.len());
                }
                _ => panic!("expected list"),
            }
        }
        assert_eq!(seen.len(), 6, "all 6 lengths observed");
    }

    #[test]
    fn function_inputs_are_unsupported() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let ty = L2Type::fun(vec![L2Type::Int], L2Type::Int);
        assert_eq!(sample_input(&ty, &mut rng), Err(SampleError::FunctionInput));
    }

    #[test]
    fn signatures_with_list_returns_have_list_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..500 {
            let (args, ret) = sample_signature(&mut rng);
            assert!((1..=3).contains(&args.len()));
            if ret.is_list() {
                assert!(args.iter().any(L2Type::is_list));
            }
        }
    }

    #[test]
    fn bool_arguments_cover_both_values() {
        use super::super::expr::Builtin;
        let prog = Expr::Lambda {
            params: vec![("r".into(), Some(L2Type::Bool))],
            body: Box::new(Expr::Call(Builtin::Neg, vec![Expr::var("r")])),
        };
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let examples =
                generate_examples_expr(&prog, &[L2Type::Bool], 4, 10_000, &mut rng).unwrap();
            assert_eq!(examples.len(), 4);
            let trues = examples.iter().filter(|(i, _)| i[0] == L2Value::Bool(true)).count();
            assert!(trues > 0 && trues < 4, "both booleans appear (seed {seed})");
        }
    }

    #[test]
    fn always_failing_program_yields_none() {
        use super::super::expr::Builtin;
        let prog = Expr::Lambda {
            params: vec![("x".into(), Some(L2Type::Int))],
            body: Box::new(Expr::Call(Builtin::Div, vec![Expr::Int(1), Expr::Int(0)])),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(generate_examples_expr(&prog, &[L2Type::Int], 4, 10_000, &mut rng), None);
    }

    #[test]
    fn count_zero_gives_empty_list() {
        let prog = Expr::Lambda {
            params: vec![("x".into(), Some(L2Type::Int))],
            body: Box::new(Expr::var("x")),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(
            generate_examples_expr(&prog, &[L2Type::Int], 0, 10_000, &mut rng),
            Some(vec![])
        );
    }
}
