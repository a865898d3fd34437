use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::problem::Problem;
use super::space::{admits, cached_space, sample_candidate, Operands};
use super::templates::TemplateSet;
use super::topic::TopicId;
use crate::exec::Exec;

/// Rejection-sampling budget before falling back to picking uniformly from
/// the enumerated operand space.
pub const REJECTION_BUDGET: u32 = 1_000;

/// Per-topic RNG so that the same seed gives unrelated streams for
/// different topics.
pub(crate) fn topic_rng(topic: TopicId, seed: u64) -> ChaCha8Rng {
    let salt = (topic.ordinal() as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

/// Problem generator bound to a template set for word problems.
#[derive(Debug, Clone, Copy)]
pub struct Generator<'a> {
    templates: &'a TemplateSet,
    budget: u32,
}

impl Default for Generator<'static> {
    fn default() -> Self {
        Generator::new(TemplateSet::builtin())
    }
}

impl<'a> Generator<'a> {
    pub fn new(templates: &'a TemplateSet) -> Self {
        Self { templates, budget: REJECTION_BUDGET }
    }

    /// Overrides the rejection budget. A budget of 0 always takes the
    /// enumeration fallback.
    pub fn with_rejection_budget(mut self, budget: u32) -> Self {
        self.budget = budget;
        self
    }

    pub fn templates(&self) -> &'a TemplateSet {
        self.templates
    }

    pub fn generate(&self, topic: TopicId, seed: u64) -> Problem {
        let mut rng = topic_rng(topic, seed);
        if topic.is_word_problem() {
            let choices: Vec<_> = self.templates.for_lesson(topic.lesson()).collect();
            let template = choices[rng.random_range(0..choices.len())];
            let inst = template.instantiate(&mut rng);
            return Problem::from_instantiation(topic, inst)
                .expect("validated templates produce valid problems");
        }
        let operands = self.draw_operands(topic, &mut rng);
        Problem::from_operands(topic, operands).expect("drawn operands are admitted")
    }

    fn draw_operands(&self, topic: TopicId, rng: &mut ChaCha8Rng) -> Operands {
        for _ in 0..self.budget {
            let candidate = sample_candidate(topic, rng);
            if admits(topic, candidate) {
                return candidate;
            }
        }
        let space = cached_space(topic).expect("numeric topics are enumerable");
        space.as_slice()[rng.random_range(0..space.count())]
    }

    /// Generates one problem per seed in `seeds`, in order.
    pub fn generate_batch(&self, topic: TopicId, seeds: std::ops::Range<u64>, exec: Exec) -> Vec<Problem> {
        let start = seeds.start;
        let len = seeds.end.saturating_sub(start);
        exec.map_range(len, |i| self.generate(topic, start + i))
    }
}

/// Generates a problem with the built-in templates. Deterministic in
/// `(topic, seed)`.
pub fn generate_problem(topic: TopicId, seed: u64) -> Problem {
    Generator::default().generate(topic, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem_gen::classify::classify_addition;
    use crate::problem_gen::topic::curriculum;

    #[test]
    fn same_seed_same_problem() {
        for &topic in curriculum() {
            assert_eq!(generate_problem(topic, 99), generate_problem(topic, 99));
        }
    }

    #[test]
    fn addition_without_regrouping_seed_42() {
        let p = generate_problem(TopicId::AddWithoutRegrouping, 42);
        let [a, b] = p.pair().unwrap();
        assert!((10..=999).contains(&a) && (10..=999).contains(&b));
        assert!(!classify_addition(a, b).unwrap().regrouping);
        assert!(p.answer <= 999);
    }

    #[test]
    fn zero_property_answers_zero() {
        for seed in 0..200 {
            assert_eq!(generate_problem(TopicId::MulZeroProperty, seed).answer, 0);
        }
    }

    #[test]
    fn fallback_path_stays_in_space() {
        let gen = Generator::default().with_rejection_budget(0);
        for &topic in curriculum().iter().filter(|t| !t.is_word_problem()) {
            for seed in 0..50 {
                gen.generate(topic, seed).validate().unwrap();
            }
        }
    }

    #[test]
    fn batch_matches_individual_calls() {
        let gen = Generator::default();
        let batch = gen.generate_batch(TopicId::SubRegroupTens, 10..40, Exec::Parallel);
        let single: Vec<_> = (10..40).map(|s| gen.generate(TopicId::SubRegroupTens, s)).collect();
        assert_eq!(batch, single);
        assert_eq!(batch, gen.generate_batch(TopicId::SubRegroupTens, 10..40, Exec::Sequential));
    }

    #[test]
    fn word_problems_use_templates() {
        for topic in [TopicId::AddWordProblems, TopicId::SubWordProblems, TopicId::MulWordProblems, TopicId::DivWordProblems] {
            for seed in 0..100 {
                let p = generate_problem(topic, seed);
                p.validate().unwrap();
                assert!(!p.prompt_text.contains('{'));
            }
        }
    }
}
