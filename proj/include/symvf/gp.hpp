#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <unordered_set>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "symvf/dataset.hpp"
#include "symvf/expr.hpp"
#include "symvf/fit.hpp"
#include "symvf/model.hpp"
#include "symvf/parallel.hpp"
#include "symvf/rng.hpp"

namespace symvf {

struct GPConfig {
    int population_size = 500;
    int n_f = 20;      // features per model
    int max_depth = 7; // delta
    int generations = 1000; // n_g per solver iteration
    int tournament_size = 4;
    double crossover_prob = 0.8;
    double mutation_prob = 0.15;
    double reproduction_prob = 0.05; // remainder of the two above also reproduces
    double const_lo = -5.0;
    double const_hi = 5.0;
    double ridge = 1e-8;
    std::uint64_t seed = 0;
    int elite_count = 1;
    int threads = 1;
    double function_prob = 0.6;
    double leaf_var_prob = 0.5;
    double const_sigma = 1.0;

    ExprGenParams gen_params() const {
        return {function_prob, leaf_var_prob, const_lo, const_hi, const_sigma};
    }
    void validate() const {
        if (population_size < 1) throw std::invalid_argument("gp: population_size must be >= 1");
        if (n_f < 1) throw std::invalid_argument("gp: n_f must be >= 1");
        if (max_depth < 0) throw std::invalid_argument("gp: max_depth must be >= 0");
        if (generations < 1) throw std::invalid_argument("gp: generations must be >= 1");
        if (tournament_size < 1) throw std::invalid_argument("gp: tournament_size must be >= 1");
        if (crossover_prob < 0 || mutation_prob < 0 || reproduction_prob < 0 ||
            crossover_prob + mutation_prob + reproduction_prob > 1.0 + 1e-12)
            throw std::invalid_argument("gp: operator probabilities must sum to at most 1");
        if (const_lo >= const_hi) throw std::invalid_argument("gp: empty constant range");
        if (ridge < 0) throw std::invalid_argument("gp: ridge must be nonnegative");
    }
};

// One feature tree plus its cached design column. Genes are shared between
// candidates; the cache is filled once per context version in a dedicated
// pass, then read concurrently.
struct Gene {
    ExprPtr tree;
    Tape tape;
    int const_count = 0;

    std::int64_t col_version = -1;
    std::vector<double> column;
    bool finite = true;
    bool constant = false;

    explicit Gene(ExprPtr t) : tree(std::move(t)), tape(*tree), const_count(count_constants(*tree)) {}
};
using GenePtr = std::shared_ptr<Gene>;

struct Candidate {
    std::vector<GenePtr> genes;

    // fitted state
    std::int64_t eval_version = -1;
    std::vector<double> beta;
    double intercept = 0.0;
    double fitness = std::numeric_limits<double>::infinity();
    int params = 0;

    // Gram cache: slot 0 is the intercept column, slot g+1 is gene g.
    std::int64_t gram_version = -1;
    Eigen::MatrixXd gram;

    // breeding hint for incremental Gram updates; cleared after scoring
    std::shared_ptr<const Candidate> parent_hint;
    std::vector<int> changed_slots;

    SymbolicModel model() const {
        SymbolicModel m;
        m.intercept = intercept;
        m.beta = beta;
        m.features.reserve(genes.size());
        for (const auto& g : genes) m.features.push_back(g->tree);
        return m;
    }
};
using CandidatePtr = std::shared_ptr<Candidate>;

// The solver side of candidate evaluation: provides design columns and turns a
// candidate with fresh columns into (beta, fitness).
class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual std::int64_t version() const = 0;        // fitness identity
    virtual std::int64_t column_version() const = 0; // design-column identity
    virtual size_t rows() const = 0;
    virtual void fill_column(Gene& gene) const = 0;
    virtual void score(Candidate& c, double ridge) const = 0;
};

namespace detail {

inline void analyze_column(Gene& gene) {
    gene.finite = true;
    double lo = gene.column.empty() ? 0.0 : gene.column[0];
    double hi = lo;
    for (double v : gene.column) {
        if (!std::isfinite(v)) {
            gene.finite = false;
            gene.constant = false;
            return;
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    gene.constant = lo == hi;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double sum(std::span<const double> a) {
    double acc = 0.0;
    for (double v : a) acc += v;
    return acc;
}

} // namespace detail

// Least-squares scoring shared by the SVI and SPI fitness functions: the
// residual is linear in the coefficients, so beta comes from a ridge solve on
// the context's design columns and the fitness is the plain mean squared
// residual (no penalty).
class RegressionEvaluator : public Evaluator {
public:
    // SVI-style: columns are feature values at the grid states.
    RegressionEvaluator(std::vector<Vec> states) : states_(std::move(states)) {}

    // SPI-style: columns are phi(x_i) - gamma*phi(x_i*), intercept column is
    // (1 - gamma).
    RegressionEvaluator(std::vector<Vec> states, double gamma)
        : states_(std::move(states)), gamma_(gamma), spi_(true) {}

    void set_targets(std::vector<double> targets) {
        targets_ = std::move(targets);
        tt_ = detail::dot(targets_, targets_);
        ++version_;
    }

    // SPI: new optimal next states invalidate the design columns as well.
    void set_samples(std::vector<Vec> x_star, std::vector<double> r_star) {
        if (!spi_) throw std::logic_error("set_samples on an SVI evaluator");
        x_star_ = std::move(x_star);
        set_targets(std::move(r_star));
        ++column_version_;
    }

    std::int64_t version() const override { return version_; }
    std::int64_t column_version() const override { return column_version_; }
    size_t rows() const override { return states_.size(); }
    double intercept_column() const { return spi_ ? 1.0 - gamma_ : 1.0; }

    void fill_column(Gene& gene) const override {
        gene.column.resize(states_.size());
        double stack[CompiledModel::kMaxStack];
        for (size_t r = 0; r < states_.size(); ++r) {
            double v = gene.tape.eval(states_[r], stack);
            if (spi_) v -= gamma_ * gene.tape.eval(x_star_[r], stack);
            gene.column[r] = v;
        }
        detail::analyze_column(gene);
        gene.col_version = column_version_;
    }

    void score(Candidate& c, double ridge) const override {
        const size_t n_f = c.genes.size();
        const auto p = static_cast<Eigen::Index>(n_f) + 1;
        const double c0 = intercept_column();
        const double n = static_cast<double>(rows());

        // Gram over [intercept | genes]; rows of non-finite genes stay zero.
        if (c.gram_version != column_version_) {
            const Candidate* parent = c.parent_hint.get();
            const bool incremental =
                parent && parent->gram_version == column_version_ && !c.changed_slots.empty();
            if (incremental) {
                c.gram = parent->gram;
                for (int slot : c.changed_slots) update_gram_row(c, slot + 1, c0);
            } else {
                c.gram.setZero(p, p);
                c.gram(0, 0) = c0 * c0 * n;
                for (size_t g = 0; g < n_f; ++g) update_gram_row(c, static_cast<int>(g) + 1, c0);
            }
            c.gram_version = column_version_;
        }
        c.parent_hint.reset();
        c.changed_slots.clear();

        c.beta.assign(n_f, 0.0);
        c.intercept = 0.0;

        bool any_bad = false;
        std::vector<int> kept;
        kept.reserve(n_f);
        for (size_t g = 0; g < n_f; ++g) {
            if (!c.genes[g]->finite) any_bad = true;
            else if (!c.genes[g]->constant) kept.push_back(static_cast<int>(g));
        }
        if (any_bad) {
            // a non-finite feature poisons every prediction of the model
            c.fitness = std::numeric_limits<double>::infinity();
            c.params = 0;
            c.eval_version = version_;
            return;
        }

        // right-hand side over [intercept | kept]
        const auto q = static_cast<Eigen::Index>(kept.size());
        Eigen::VectorXd rhs(q + 1);
        rhs(0) = c0 * detail::sum(targets_);
        for (Eigen::Index j = 0; j < q; ++j)
            rhs(j + 1) = detail::dot(c.genes[static_cast<size_t>(kept[static_cast<size_t>(j)])]->column,
                                     targets_);

        Eigen::MatrixXd a(q + 1, q + 1);
        a(0, 0) = c.gram(0, 0);
        for (Eigen::Index j = 0; j < q; ++j) {
            const int gj = kept[static_cast<size_t>(j)] + 1;
            a(0, j + 1) = a(j + 1, 0) = c.gram(0, gj);
            for (Eigen::Index k = 0; k <= j; ++k) {
                const int gk = kept[static_cast<size_t>(k)] + 1;
                a(j + 1, k + 1) = a(k + 1, j + 1) = c.gram(gj, gk);
            }
        }

        Eigen::MatrixXd reg = a;
        for (Eigen::Index j = 1; j <= q; ++j) reg(j, j) += ridge;
        Eigen::VectorXd scale(q + 1);
        for (Eigen::Index j = 0; j <= q; ++j) {
            const double d = std::sqrt(reg(j, j));
            scale(j) = (d > 0.0 && std::isfinite(d)) ? 1.0 / d : 1.0;
        }
        Eigen::MatrixXd scaled = scale.asDiagonal() * reg * scale.asDiagonal();
        Eigen::VectorXd srhs = scale.asDiagonal() * rhs;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(scaled);
        bool solved = false;
        Eigen::VectorXd coef(q + 1);
        if (ldlt.info() == Eigen::Success) {
            coef = scale.asDiagonal() * ldlt.solve(srhs).eval();
            solved = coef.allFinite();
        }
        if (!solved) {
            coef.setZero();
            coef(0) = c0 != 0.0 ? detail::sum(targets_) / (n * c0) : 0.0;
        }

        // mean squared residual from the Gram identity
        const double quad = coef.dot(a * coef);
        double mse = (tt_ - 2.0 * coef.dot(rhs) + quad) / n;
        if (!std::isfinite(mse)) mse = std::numeric_limits<double>::infinity();
        c.fitness = std::max(0.0, mse);

        c.intercept = coef(0);
        for (Eigen::Index j = 0; j < q; ++j)
            c.beta[static_cast<size_t>(kept[static_cast<size_t>(j)])] = coef(j + 1);
        c.params = c.intercept != 0.0 ? 1 : 0;
        for (size_t g = 0; g < n_f; ++g)
            if (c.beta[g] != 0.0) c.params += 1 + c.genes[g]->const_count;
        c.eval_version = version_;
    }

private:
    void update_gram_row(Candidate& c, int slot, double c0) const {
        const Gene& gene = *c.genes[static_cast<size_t>(slot - 1)];
        const auto p = c.gram.rows();
        if (!gene.finite) {
            for (Eigen::Index k = 0; k < p; ++k) c.gram(slot, k) = c.gram(k, slot) = 0.0;
            return;
        }
        c.gram(0, slot) = c.gram(slot, 0) = c0 * detail::sum(gene.column);
        for (Eigen::Index k = 1; k < p; ++k) {
            const Gene& other = *c.genes[static_cast<size_t>(k - 1)];
            const double v =
                other.finite ? (k == slot ? detail::dot(gene.column, gene.column)
                                          : detail::dot(gene.column, other.column))
                             : 0.0;
            c.gram(slot, k) = c.gram(k, slot) = v;
        }
    }

    std::vector<Vec> states_;
    std::vector<Vec> x_star_;
    std::vector<double> targets_;
    double tt_ = 0.0;
    double gamma_ = 0.0;
    bool spi_ = false;
    std::int64_t version_ = 0;
    std::int64_t column_version_ = 0;
};

// Direct Bellman fitness (the non-iterating method). The residual is not
// linear in beta because of the max over actions, so the coefficients are
// fitted by a short alternation: fix the greedy action per state, solve the
// resulting linear problem, repeat until the action choice stabilizes.
class BellmanEvaluator : public Evaluator {
public:
    BellmanEvaluator(const TransitionDataset& d, double gamma, int max_inner = 5)
        : d_(&d), gamma_(gamma), max_inner_(max_inner) {}

    std::int64_t version() const override { return 0; }
    std::int64_t column_version() const override { return 0; }
    size_t rows() const override { return d_->n_x(); }

    void fill_column(Gene& gene) const override {
        gene.column.resize(d_->n_x());
        double stack[CompiledModel::kMaxStack];
        for (size_t r = 0; r < d_->n_x(); ++r) gene.column[r] = gene.tape.eval(d_->states[r], stack);
        detail::analyze_column(gene);
        gene.col_version = 0;
    }

    void score(Candidate& c, double ridge) const override {
        const size_t n_x = d_->n_x();
        const size_t n_u = d_->n_u();
        const size_t n_f = c.genes.size();
        c.beta.assign(n_f, 0.0);
        c.intercept = 0.0;
        c.parent_hint.reset();
        c.changed_slots.clear();

        for (const auto& g : c.genes) {
            if (!g->finite) {
                c.fitness = std::numeric_limits<double>::infinity();
                c.params = 0;
                c.eval_version = version();
                return;
            }
        }

        // feature values at every next state, flattened (gene-major)
        thread_local std::vector<double> next_vals;
        next_vals.resize(n_f * n_x * n_u);
        double stack[CompiledModel::kMaxStack];
        for (size_t g = 0; g < n_f; ++g) {
            double* row = next_vals.data() + g * n_x * n_u;
            const Tape& tape = c.genes[g]->tape;
            for (size_t i = 0; i < n_x; ++i)
                for (size_t j = 0; j < n_u; ++j) row[i * n_u + j] = tape.eval(d_->next_states[i][j], stack);
        }
        auto v_next = [&](size_t i, size_t j) {
            double acc = c.intercept;
            for (size_t g = 0; g < n_f; ++g)
                acc += c.beta[g] * next_vals[g * n_x * n_u + i * n_u + j];
            return acc;
        };

        std::vector<size_t> jstar(n_x, 0), prev(n_x, SIZE_MAX);
        std::vector<std::vector<double>> psi(n_f, std::vector<double>(n_x));
        std::vector<double> rstar(n_x);
        for (int inner = 0; inner < max_inner_; ++inner) {
            for (size_t i = 0; i < n_x; ++i) {
                size_t best = 0;
                double best_score = -std::numeric_limits<double>::infinity();
                for (size_t j = 0; j < n_u; ++j) {
                    const double s = d_->rewards[i][j] + gamma_ * v_next(i, j);
                    if (std::isfinite(s) && s > best_score) {
                        best_score = s;
                        best = j;
                    }
                }
                jstar[i] = best;
            }
            if (jstar == prev) break;
            prev = jstar;
            for (size_t i = 0; i < n_x; ++i) rstar[i] = d_->rewards[i][jstar[i]];
            for (size_t g = 0; g < n_f; ++g)
                for (size_t i = 0; i < n_x; ++i)
                    psi[g][i] = c.genes[g]->column[i] -
                                gamma_ * next_vals[g * n_x * n_u + i * n_u + jstar[i]];
            FitResult fit = fit_coefficients(psi, rstar, ridge, 1.0 - gamma_);
            c.beta = fit.beta;
            c.intercept = fit.intercept;
        }

        // Bellman error of the fitted model over the training set
        double acc = 0.0;
        for (size_t i = 0; i < n_x; ++i) {
            double best = -std::numeric_limits<double>::infinity();
            for (size_t j = 0; j < n_u; ++j) best = std::max(best, d_->rewards[i][j] + gamma_ * v_next(i, j));
            double vx = c.intercept;
            for (size_t g = 0; g < n_f; ++g) vx += c.beta[g] * c.genes[g]->column[i];
            const double e = best - vx;
            acc += e * e;
        }
        const double fitness = acc / static_cast<double>(n_x);
        c.fitness = std::isfinite(fitness) ? fitness : std::numeric_limits<double>::infinity();
        c.params = c.intercept != 0.0 ? 1 : 0;
        for (size_t g = 0; g < n_f; ++g)
            if (c.beta[g] != 0.0) c.params += 1 + c.genes[g]->const_count;
        c.eval_version = version();
    }

private:
    const TransitionDataset* d_;
    double gamma_;
    int max_inner_;
};

// ---------------------------------------------------------------------------

struct EvolveResult {
    SymbolicModel best;
    double best_fitness = std::numeric_limits<double>::infinity();
    int best_params = 0;
    std::vector<double> history; // best-so-far fitness per generation
};

// argmin fitness; ties by fewer parameters, then by population index. When
// every candidate is non-finite, the first candidate wins with zeroed
// coefficients (already the scored state).
inline size_t best_index(const std::vector<CandidatePtr>& population) {
    size_t best = 0;
    for (size_t i = 1; i < population.size(); ++i) {
        const Candidate& a = *population[i];
        const Candidate& b = *population[best];
        if (a.fitness < b.fitness || (a.fitness == b.fitness && a.params < b.params)) best = i;
    }
    return best;
}

inline SymbolicModel best_of(const std::vector<CandidatePtr>& population) {
    return population[best_index(population)]->model();
}

// Multi-gene GP: a candidate is a set of n_f feature trees whose coefficients
// come from least squares against the active fitness context. Tournament
// selection, per-gene subtree crossover, mutation, elitism. All randomness is
// drawn from streams keyed by (seed, generation, slot), so results do not
// depend on thread count.
class GPEngine {
public:
    GPEngine(GPConfig config, int n_vars, std::shared_ptr<Evaluator> evaluator)
        : cfg_(config), n_vars_(n_vars), eval_(std::move(evaluator)) {
        cfg_.validate();
        reset_population();
    }

    const GPConfig& config() const { return cfg_; }
    const std::vector<CandidatePtr>& population() const { return pop_; }
    Evaluator& evaluator() { return *eval_; }

    void reset_population(std::uint64_t salt = 0) {
        pop_.assign(static_cast<size_t>(cfg_.population_size), nullptr);
        const ExprGenParams gen = cfg_.gen_params();
        parallel_for(pop_.size(), cfg_.threads, [&](size_t i) {
            Rng rng(derive_stream(cfg_.seed ^ salt, 0, i));
            auto c = std::make_shared<Candidate>();
            c->genes.reserve(static_cast<size_t>(cfg_.n_f));
            for (int g = 0; g < cfg_.n_f; ++g)
                c->genes.push_back(std::make_shared<Gene>(random_expr(rng, n_vars_, cfg_.max_depth, gen)));
            pop_[i] = std::move(c);
        });
        generation_ = 0;
    }

    EvolveResult evolve(int n_g) { return evolve_with_checkpoints(n_g, n_g, nullptr); }

    // Runs total_generations evaluation rounds, breeding between consecutive
    // rounds, and reports the best-so-far model every `every` rounds.
    EvolveResult evolve_with_checkpoints(
        int total_generations, int every,
        const std::function<void(int, const EvolveResult&)>& checkpoint) {
        EvolveResult res;
        for (int g = 1; g <= total_generations; ++g) {
            if (g > 1) breed();
            evaluate_all();
            const size_t bi = best_index(pop_);
            const Candidate& b = *pop_[bi];
            if (b.fitness < res.best_fitness ||
                (b.fitness == res.best_fitness && b.params < res.best_params) ||
                res.history.empty()) {
                res.best = b.model();
                res.best_fitness = b.fitness;
                res.best_params = b.params;
            }
            res.history.push_back(res.best_fitness);
            if (checkpoint && g % every == 0) checkpoint(g, res);
        }
        return res;
    }

    // Re-scores the population against the current context state.
    void evaluate_all() {
        const std::int64_t col_ver = eval_->column_version();
        const std::int64_t ver = eval_->version();

        std::vector<Gene*> stale_genes;
        std::vector<Candidate*> stale_cands;
        std::unordered_set<const void*> seen;
        for (const auto& c : pop_) {
            if (c->eval_version != ver && seen.insert(c.get()).second) stale_cands.push_back(c.get());
            for (const auto& g : c->genes)
                if (g->col_version != col_ver && seen.insert(g.get()).second)
                    stale_genes.push_back(g.get());
        }
        parallel_for(stale_genes.size(), cfg_.threads,
                     [&](size_t i) { eval_->fill_column(*stale_genes[i]); });
        parallel_for(stale_cands.size(), cfg_.threads,
                     [&](size_t i) { eval_->score(*stale_cands[i], cfg_.ridge); });
    }

private:
    struct Order {
        bool operator()(const CandidatePtr& a, const CandidatePtr& b) const {
            if (a->fitness != b->fitness) return a->fitness < b->fitness;
            return a->params < b->params;
        }
    };

    size_t tournament(Rng& rng) const {
        size_t best = static_cast<size_t>(rng.uniform_int(static_cast<int>(pop_.size())));
        for (int k = 1; k < cfg_.tournament_size; ++k) {
            const size_t i = static_cast<size_t>(rng.uniform_int(static_cast<int>(pop_.size())));
            if (Order{}(pop_[i], pop_[best])) best = i;
        }
        return best;
    }

    void breed() {
        ++generation_;
        const size_t P = pop_.size();
        std::vector<CandidatePtr> next(P);

        // elitism: carry the best candidates over unchanged
        std::vector<size_t> order(P);
        for (size_t i = 0; i < P; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return Order{}(pop_[a], pop_[b]); });
        const size_t elite = std::min<size_t>(static_cast<size_t>(cfg_.elite_count), P);
        for (size_t e = 0; e < elite; ++e) next[e] = pop_[order[e]];

        const ExprGenParams gen = cfg_.gen_params();
        for (size_t slot = elite; slot < P; ++slot) {
            Rng rng(derive_stream(cfg_.seed, static_cast<std::uint64_t>(generation_), slot));
            const double r = rng.uniform01();
            if (r < cfg_.crossover_prob) {
                const CandidatePtr& pa = pop_[tournament(rng)];
                const CandidatePtr& pb = pop_[tournament(rng)];
                next[slot] = crossover(pa, pb, rng);
            } else if (r < cfg_.crossover_prob + cfg_.mutation_prob) {
                const CandidatePtr& pa = pop_[tournament(rng)];
                next[slot] = mutate(pa, rng, gen);
            } else {
                next[slot] = pop_[tournament(rng)];
            }
        }
        pop_ = std::move(next);
    }

    CandidatePtr offspring_of(const CandidatePtr& parent, int slot, GenePtr gene) const {
        auto child = std::make_shared<Candidate>();
        child->genes = parent->genes;
        child->genes[static_cast<size_t>(slot)] = std::move(gene);
        child->parent_hint = parent;
        child->changed_slots = {slot};
        return child;
    }

    // Subtree crossover between one gene of each parent. The insertion point
    // in A and the donor subtree in B are chosen uniformly among combinations
    // that respect the depth bound.
    CandidatePtr crossover(const CandidatePtr& pa, const CandidatePtr& pb, Rng& rng) const {
        const int slot_a = rng.uniform_int(cfg_.n_f);
        const int slot_b = rng.uniform_int(cfg_.n_f);
        const ExprPtr& tree_a = pa->genes[static_cast<size_t>(slot_a)]->tree;
        const ExprPtr& tree_b = pb->genes[static_cast<size_t>(slot_b)]->tree;

        const auto nodes_a = detail::list_nodes(tree_a);
        const int point_a = rng.uniform_int(static_cast<int>(nodes_a.size()));
        const int budget = cfg_.max_depth - nodes_a[static_cast<size_t>(point_a)].depth_from_root;

        const auto nodes_b = detail::list_nodes(tree_b);
        std::vector<const detail::NodeRef*> donors;
        donors.reserve(nodes_b.size());
        for (const auto& nb : nodes_b)
            if (depth(*nb.node) <= budget) donors.push_back(&nb);
        // a leaf always fits, so donors is never empty
        const ExprPtr& donor =
            donors[static_cast<size_t>(rng.uniform_int(static_cast<int>(donors.size())))]->node;
        ExprPtr child_tree = replace_subtree(tree_a, point_a, donor);
        return offspring_of(pa, slot_a, std::make_shared<Gene>(std::move(child_tree)));
    }

    CandidatePtr mutate(const CandidatePtr& parent, Rng& rng, const ExprGenParams& gen) const {
        const int slot = rng.uniform_int(cfg_.n_f);
        ExprPtr tree =
            mutate_expr(parent->genes[static_cast<size_t>(slot)]->tree, rng, n_vars_, cfg_.max_depth, gen);
        return offspring_of(parent, slot, std::make_shared<Gene>(std::move(tree)));
    }

    GPConfig cfg_;
    int n_vars_;
    std::shared_ptr<Evaluator> eval_;
    std::vector<CandidatePtr> pop_;
    std::uint64_t generation_ = 0;
};

} // namespace symvf
