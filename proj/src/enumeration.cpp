#include "bwlat/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace bwlat {

namespace {

// Preprocessing strength for the search basis; tighter than the LLL default
// because the tree size is very sensitive to the Gram–Schmidt profile.
const Rational kSearchDelta(99, 100);

// Pruning slack relative to the bound. Rounding error in the double
// Gram–Schmidt recurrences stays many orders of magnitude below this.
constexpr double kRelativeSlack = 1e-7;

using Wide = __int128;

struct Bucket {
    NormCounts counts;
    std::vector<SmallVector> vectors;
    std::uint64_t nodes = 0;
};

struct SearchRequest {
    std::int64_t bound = 0;           // unscaled
    bool symmetric = true;            // t = 0: walk sign representatives only
    std::vector<double> center;  // -τ, one entry per level
    std::vector<std::int64_t> shift;  // exact t (zeros when unshifted)
    bool collect = false;
    std::int64_t keep_above = -1;     // collect only norms above this
};

struct SharedProgress {
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::uint64_t budget = kDefaultNodeBudget;
};

}  // namespace

BudgetExceeded::BudgetExceeded(std::uint64_t nodes, std::uint64_t budget)
    : std::runtime_error("enumeration node budget exceeded: " + std::to_string(nodes) + " nodes > budget " +
                         std::to_string(budget)),
      nodes_(nodes),
      budget_(budget) {}

FrameError::FrameError(const std::string& what, SmallVector ell, std::vector<SmallVector> found)
    : std::runtime_error(what), ell_(std::move(ell)), found_(std::move(found)) {}

std::uint64_t ThetaSlice::count(std::int64_t norm) const {
    auto it = counts.find(norm);
    return it == counts.end() ? 0 : it->second;
}

std::optional<std::int64_t> ThetaSlice::minimum() const {
    if (counts.empty()) return std::nullopt;
    return counts.begin()->first;
}

std::uint64_t CosetSlice::count(std::int64_t norm) const {
    auto it = counts.find(norm);
    return it == counts.end() ? 0 : it->second;
}

struct Enumerator::Impl {
    IntegerLattice lattice;
    EnumOptions options;
    IntMatrix reduced;
    int n = 0;
    int scale = 0;
    std::vector<std::int64_t> basis;  // n×n row-major
    std::vector<Rational> mu_exact;   // n×n, lower triangle
    std::vector<Rational> r_exact;    // |b*_i|^2
    std::vector<double> mu;      // mu[i*n + j], j < i
    std::vector<double> r;

    Impl(const IntegerLattice& l, EnumOptions o) : lattice(l), options(o) {
        reduced = lll_reduce_basis(lattice.basis(), kSearchDelta);
        n = static_cast<int>(reduced.rows());
        scale = lattice.gram_scale();
        basis.resize(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) basis[at(i, j)] = to_int64(reduced(i, j));
        }

        const IntMatrix gram = reduced * reduced.transpose();
        mu_exact.assign(static_cast<std::size_t>(n) * n, Rational(0));
        r_exact.assign(static_cast<std::size_t>(n), Rational(0));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) {
                Rational acc(gram(i, j));
                for (int k = 0; k < j; ++k) acc -= mu_exact[at(i, k)] * mu_exact[at(j, k)] * r_exact[k];
                mu_exact[at(i, j)] = acc / r_exact[static_cast<std::size_t>(j)];
            }
            Rational acc(gram(i, i));
            for (int k = 0; k < i; ++k) acc -= mu_exact[at(i, k)] * mu_exact[at(i, k)] * r_exact[k];
            r_exact[static_cast<std::size_t>(i)] = acc;
        }
        mu.resize(mu_exact.size());
        r.resize(r_exact.size());
        for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = mu_exact[i].convert_to<double>();
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = r_exact[i].convert_to<double>();
    }

    std::size_t at(int i, int j) const { return static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j); }

    std::int64_t unscaled(std::int64_t bound) const {
        if (bound < 0) throw std::invalid_argument("enumeration bound must be nonnegative");
        if (scale >= 62 || bound > (std::int64_t{1} << (62 - scale))) {
            throw std::overflow_error("enumeration bound too large");
        }
        return bound << scale;
    }

    std::vector<double> shift_center(const IntVector& t) const {
        // s_j = (t, b*_j) by the Gram–Schmidt recurrence; the centre is -s_j/r_j.
        std::vector<Rational> s(static_cast<std::size_t>(n));
        std::vector<double> center(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            Rational acc(t.dot(reduced.row(j)));
            for (int k = 0; k < j; ++k) acc -= mu_exact[at(j, k)] * s[static_cast<std::size_t>(k)];
            s[static_cast<std::size_t>(j)] = acc;
            center[static_cast<std::size_t>(j)] =
                Rational(-acc / r_exact[static_cast<std::size_t>(j)]).convert_to<double>();
        }
        return center;
    }

    std::vector<Bucket> run(const SearchRequest& request) const;
};

namespace {

// Depth-first walker over the coefficient tree, levels n-1 (top) to 0.
class Walker {
public:
    Walker(const Enumerator::Impl& e, const SearchRequest& req, SharedProgress& progress)
        : e_(e),
          req_(req),
          progress_(progress),
          n_(e.n),
          limit_(static_cast<double>(req.bound) * (1 + kRelativeSlack) + kRelativeSlack),
          c_(static_cast<std::size_t>(n_), 0),
          rho_(static_cast<std::size_t>(n_) + 1, 0.0),
          center_(static_cast<std::size_t>(n_), 0.0),
          partsum_(static_cast<std::size_t>(n_) * (n_ + 1), 0.0),
          stale_(static_cast<std::size_t>(n_), n_ - 1),
          zero_above_(static_cast<std::size_t>(n_), true),
          x_(static_cast<std::size_t>(n_)) {
        for (int k = 0; k < n_; ++k) ps(k, n_) = req_.center[static_cast<std::size_t>(k)];
    }

    // Walk the levels >= stop_level, handing each assignment of the levels
    // above stop_level to on_prefix instead of descending further.
    void collect_prefixes(int stop_level, std::vector<std::vector<std::int64_t>>& prefixes, Bucket& bucket) {
        bucket_ = &bucket;
        stop_level_ = stop_level;
        prefixes_ = &prefixes;
        center_[static_cast<std::size_t>(n_ - 1)] = ps(n_ - 1, n_);
        level(n_ - 1);
        flush();
    }

    void run_prefix(const std::vector<std::int64_t>& prefix, Bucket& bucket) {
        bucket_ = &bucket;
        stop_level_ = -1;
        prefixes_ = nullptr;
        const int top = n_ - 1;
        const int below = top - static_cast<int>(prefix.size());
        std::fill(stale_.begin(), stale_.end(), n_ - 1);
        center_[static_cast<std::size_t>(top)] = ps(top, n_);
        rho_[static_cast<std::size_t>(n_)] = 0.0;
        for (int k = top; k > below; --k) {
            const std::int64_t v = prefix[static_cast<std::size_t>(top - k)];
            c_[static_cast<std::size_t>(k)] = v;
            const double y = static_cast<double>(v) - center_[static_cast<std::size_t>(k)];
            rho_[static_cast<std::size_t>(k)] = rho_[static_cast<std::size_t>(k) + 1] + y * y * e_.r[static_cast<std::size_t>(k)];
            descend(k);
        }
        level(below);
        flush();
    }

private:
    double& ps(int k, int j) { return partsum_[static_cast<std::size_t>(k) * (n_ + 1) + static_cast<std::size_t>(j)]; }

    // Prepare level k-1 after c[k] was set.
    void descend(int k) {
        const int lower = k - 1;
        for (int j = stale_[static_cast<std::size_t>(k)]; j >= k; --j) {
            ps(lower, j) = ps(lower, j + 1) - static_cast<double>(c_[static_cast<std::size_t>(j)]) * e_.mu[e_.at(j, lower)];
        }
        stale_[static_cast<std::size_t>(lower)] = std::max(stale_[static_cast<std::size_t>(lower)], stale_[static_cast<std::size_t>(k)]);
        stale_[static_cast<std::size_t>(k)] = k;
        center_[static_cast<std::size_t>(lower)] = ps(lower, k);
        zero_above_[static_cast<std::size_t>(lower)] = zero_above_[static_cast<std::size_t>(k)] && c_[static_cast<std::size_t>(k)] == 0;
    }

    void level(int k) {
        if (prefixes_ != nullptr && k == stop_level_) {
            std::vector<std::int64_t> prefix;
            for (int j = n_ - 1; j > k; --j) prefix.push_back(c_[static_cast<std::size_t>(j)]);
            prefixes_->push_back(std::move(prefix));
            return;
        }
        const auto ku = static_cast<std::size_t>(k);
        const double remaining = limit_ - rho_[ku + 1];
        if (remaining < 0) return;
        const double radius = std::sqrt(remaining / e_.r[ku]);
        const double ctr = center_[ku];
        auto lo = static_cast<std::int64_t>(std::ceil(ctr - radius));
        const auto hi = static_cast<std::int64_t>(std::floor(ctr + radius));
        if (req_.symmetric && zero_above_[ku] && lo < 0) lo = 0;
        for (std::int64_t v = lo; v <= hi; ++v) {
            if ((++local_nodes_ & 0xFFFF) == 0) flush();
            c_[ku] = v;
            const double y = static_cast<double>(v) - ctr;
            const double partial = rho_[ku + 1] + y * y * e_.r[ku];
            if (partial > limit_) continue;
            if (k == 0) {
                leaf();
                continue;
            }
            rho_[ku] = partial;
            descend(k);
            level(k - 1);
        }
    }

    void leaf() {
        if (req_.symmetric && zero_above_[0] && c_[0] == 0) return;
        Wide norm = 0;
        for (int j = 0; j < n_; ++j) {
            Wide acc = req_.shift[static_cast<std::size_t>(j)];
            for (int i = 0; i < n_; ++i) {
                const std::int64_t ci = c_[static_cast<std::size_t>(i)];
                if (ci != 0) acc += static_cast<Wide>(ci) * e_.basis[e_.at(i, j)];
            }
            x_[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(acc);
            norm += acc * acc;
        }
        if (norm > req_.bound) return;
        const auto exact = static_cast<std::int64_t>(norm);
        const std::int64_t reported = exact >> e_.scale;
        const std::uint64_t multiplicity = req_.symmetric ? 2 : 1;
        bucket_->counts[reported] += multiplicity;
        if (req_.collect && reported > req_.keep_above) {
            SmallVector v(n_);
            for (int j = 0; j < n_; ++j) v(j) = x_[static_cast<std::size_t>(j)];
            bucket_->vectors.push_back(v);
            if (req_.symmetric) bucket_->vectors.push_back(-v);
        }
    }

    void flush() {
        const std::uint64_t delta = local_nodes_ - flushed_;
        flushed_ = local_nodes_;
        bucket_->nodes += delta;
        const std::uint64_t total = progress_.nodes.fetch_add(delta) + delta;
        if (total > progress_.budget) {
            progress_.stop = true;
            throw BudgetExceeded(total, progress_.budget);
        }
        if (progress_.stop) throw BudgetExceeded(total, progress_.budget);
    }

    const Enumerator::Impl& e_;
    const SearchRequest& req_;
    SharedProgress& progress_;
    int n_;
    double limit_;
    std::vector<std::int64_t> c_;
    std::vector<double> rho_;
    std::vector<double> center_;
    std::vector<double> partsum_;
    std::vector<int> stale_;
    std::vector<bool> zero_above_;
    std::vector<std::int64_t> x_;
    Bucket* bucket_ = nullptr;
    int stop_level_ = -1;
    std::vector<std::vector<std::int64_t>>* prefixes_ = nullptr;
    std::uint64_t local_nodes_ = 0;
    std::uint64_t flushed_ = 0;
};

unsigned worker_count(const EnumOptions& options) {
    unsigned t = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
    return std::max(1u, t);
}

}  // namespace

std::vector<Bucket> Enumerator::Impl::run(const SearchRequest& request) const {
    SharedProgress progress;
    progress.budget = options.node_budget;
    const unsigned workers = worker_count(options);

    if (workers == 1 || n < 2) {
        std::vector<Bucket> buckets(1);
        Walker walker(*this, request, progress);
        walker.run_prefix({}, buckets[0]);
        return buckets;
    }

    // Split the top of the tree into enough subtrees to balance the workers.
    // Totals do not depend on the split: prefix nodes plus subtree nodes is
    // exactly the single-walk node count.
    const std::size_t target = 32 * static_cast<std::size_t>(workers);
    std::vector<std::vector<std::int64_t>> prefixes;
    Bucket head;
    for (int depth = 1; depth < n; ++depth) {
        prefixes.clear();
        head = Bucket{};
        SharedProgress scratch;
        scratch.budget = options.node_budget;
        Walker walker(*this, request, scratch);
        walker.collect_prefixes(n - 1 - depth, prefixes, head);
        if (prefixes.size() >= target || depth == n - 1) {
            progress.nodes = head.nodes;
            break;
        }
    }

    std::vector<Bucket> buckets(prefixes.size() + 1);
    buckets[0] = std::move(head);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            Walker walker(*this, request, progress);
            for (std::size_t i = next++; i < prefixes.size(); i = next++) {
                if (progress.stop) return;
                walker.run_prefix(prefixes[i], buckets[i + 1]);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            progress.stop = true;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return buckets;
}

Enumerator::Enumerator(const IntegerLattice& lattice, EnumOptions options)
    : impl_(std::make_unique<Impl>(lattice, options)) {}
Enumerator::~Enumerator() = default;
Enumerator::Enumerator(Enumerator&&) noexcept = default;
Enumerator& Enumerator::operator=(Enumerator&&) noexcept = default;

const IntegerLattice& Enumerator::lattice() const { return impl_->lattice; }
const IntMatrix& Enumerator::reduced_basis() const { return impl_->reduced; }
const EnumOptions& Enumerator::options() const { return impl_->options; }

namespace {

template <typename Slice>
void merge_buckets(std::vector<Bucket>& buckets, Slice& slice) {
    for (auto& b : buckets) {
        for (const auto& [norm, count] : b.counts) slice.counts[norm] += count;
        slice.vectors.insert(slice.vectors.end(), std::make_move_iterator(b.vectors.begin()),
                             std::make_move_iterator(b.vectors.end()));
        slice.nodes += b.nodes;
    }
}

}  // namespace

ThetaSlice Enumerator::short_vectors(std::int64_t bound, bool collect) const {
    return collect ? short_vectors_above(bound, -1) : short_vectors_above(bound, bound);
}

ThetaSlice Enumerator::short_vectors_above(std::int64_t bound, std::int64_t keep_above) const {
    SearchRequest req;
    req.bound = impl_->unscaled(bound);
    req.symmetric = true;
    req.center.assign(static_cast<std::size_t>(impl_->n), 0.0);
    req.shift.assign(static_cast<std::size_t>(impl_->n), 0);
    req.collect = keep_above < bound;
    req.keep_above = keep_above;
    auto buckets = impl_->run(req);
    ThetaSlice slice;
    slice.bound = bound;
    merge_buckets(buckets, slice);
    return slice;
}

CosetSlice Enumerator::coset(const IntVector& t, std::int64_t bound, bool collect) const {
    if (t.size() != impl_->n) throw DimensionError("coset representative has the wrong length");
    SearchRequest req;
    req.bound = impl_->unscaled(bound);
    req.symmetric = false;
    req.center = impl_->shift_center(t);
    req.shift.resize(static_cast<std::size_t>(impl_->n));
    for (int j = 0; j < impl_->n; ++j) req.shift[static_cast<std::size_t>(j)] = to_int64(t(j));
    req.collect = collect;
    auto buckets = impl_->run(req);
    CosetSlice slice;
    slice.representative = to_small_vector(t);
    slice.bound = bound;
    merge_buckets(buckets, slice);
    return slice;
}

ThetaSlice short_vectors(const IntegerLattice& lattice, std::int64_t bound, bool collect,
                         const EnumOptions& options) {
    return Enumerator(lattice, options).short_vectors(bound, collect);
}

std::int64_t lattice_min(const IntegerLattice& lattice, const EnumOptions& options) {
    Enumerator e(lattice, options);
    const IntMatrix& b = e.reduced_basis();
    Integer shortest = b.row(0).squaredNorm();
    for (Index i = 1; i < b.rows(); ++i) shortest = std::min(shortest, Integer(b.row(i).squaredNorm()));
    const Integer unit = pow2(static_cast<unsigned>(lattice.gram_scale()));
    const std::int64_t bound = to_int64(shortest / unit);
    auto slice = e.short_vectors(bound, false);
    return *slice.minimum();
}

GapResult gap_check(const IntegerLattice& lattice, std::int64_t lower, std::int64_t upper,
                    const EnumOptions& options) {
    if (lower >= upper) throw std::invalid_argument("gap_check needs lower < upper");
    GapResult result;
    result.slice = Enumerator(lattice, options).short_vectors_above(upper - 1, lower);
    if (!result.slice.vectors.empty()) {
        result.pass = false;
        result.counterexample = result.slice.vectors.front();
    }
    result.slice.vectors.clear();
    return result;
}

CosetSlice coset_short_vectors(const IntegerLattice& lattice, const IntVector& t, std::int64_t bound,
                               bool collect, const EnumOptions& options) {
    return Enumerator(lattice, options).coset(t, bound, collect);
}

}  // namespace bwlat
