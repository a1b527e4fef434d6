#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "operadcalc/formal_sum.hpp"

namespace operadcalc {

/// Sparse row over an indexed ambient basis, entries sorted by column.
using SparseRow = std::vector<std::pair<int, Scalar>>;

/// Incremental exact Gaussian elimination over a fixed ambient basis.
/// Rows are kept pivot-normalized (leading coefficient 1) and fully reduced
/// against the pivots present at insertion time; membership tests and rank
/// are valid at any moment.
class SpanBuilder {
public:
    explicit SpanBuilder(std::vector<std::string> ambient) : ambient_(std::move(ambient)) {
        index_.reserve(ambient_.size() * 2);
        for (std::size_t i = 0; i < ambient_.size(); ++i) {
            if (!index_.emplace(ambient_[i], static_cast<int>(i)).second)
                throw std::invalid_argument("SpanBuilder: duplicate ambient key " + ambient_[i]);
        }
    }

    const std::vector<std::string>& ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(ambient_.size()); }
    int rank() const { return static_cast<int>(rows_.size()); }
    bool full() const { return rank() == dim(); }

    int index_of(const std::string& key) const {
        auto it = index_.find(key);
        if (it == index_.end()) throw std::invalid_argument("SpanBuilder: key outside ambient: " + key);
        return it->second;
    }

    SparseRow to_row(const FormalSum& v) const {
        std::map<int, Scalar> tmp;
        for (const auto& [k, c] : v.terms()) tmp.emplace(index_of(k), c);
        SparseRow r;
        r.reserve(tmp.size());
        for (auto& [i, c] : tmp) r.emplace_back(i, c);
        return r;
    }

    FormalSum to_sum(const SparseRow& r) const {
        FormalSum s;
        for (const auto& [i, c] : r) s.add_term(ambient_[i], c);
        return s;
    }

    /// Fully reduces v against the stored rows.
    SparseRow reduce(const SparseRow& v) const {
        std::map<int, Scalar> work(v.begin(), v.end());
        SparseRow residual;
        while (!work.empty()) {
            auto it = work.begin();
            int col = it->first;
            Scalar c = it->second;
            if (c == 0) {
                work.erase(it);
                continue;
            }
            auto rit = rows_.find(col);
            if (rit == rows_.end()) {
                residual.emplace_back(col, c);
                work.erase(it);
                continue;
            }
            // subtract c * pivot row; only columns > col are touched
            work.erase(it);
            const SparseRow& piv = rit->second;
            for (std::size_t j = 1; j < piv.size(); ++j) {
                auto [pc, pv] = piv[j];
                auto wit = work.find(pc);
                if (wit == work.end()) {
                    work.emplace(pc, -c * pv);
                } else {
                    wit->second -= c * pv;
                    if (wit->second == 0) work.erase(wit);
                }
            }
        }
        return residual;
    }

    bool contains_row(const SparseRow& v) const { return reduce(v).empty(); }
    bool contains(const FormalSum& v) const { return contains_row(to_row(v)); }

    /// Inserts v into the span; returns true if the rank grew.
    bool insert_row(const SparseRow& v) {
        SparseRow r = reduce(v);
        if (r.empty()) return false;
        Scalar lead = r.front().second;
        if (lead != 1)
            for (auto& [i, c] : r) c /= lead;
        rows_.emplace(r.front().first, std::move(r));
        return true;
    }
    bool insert(const FormalSum& v) { return insert_row(to_row(v)); }

    /// Rows back-eliminated into reduced row echelon form, pivot order.
    std::vector<SparseRow> rref_rows() const {
        std::vector<SparseRow> out;
        out.reserve(rows_.size());
        // process pivots from the largest down so tails are already clean
        std::map<int, SparseRow> clean;
        for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
            std::map<int, Scalar> work(it->second.begin(), it->second.end());
            SparseRow row;
            row.emplace_back(it->first, Scalar(1));
            work.erase(it->first);
            while (!work.empty()) {
                auto w = work.begin();
                auto cit = clean.find(w->first);
                if (cit == clean.end()) {
                    row.emplace_back(w->first, w->second);
                    work.erase(w);
                    continue;
                }
                Scalar c = w->second;
                work.erase(w);
                const SparseRow& piv = cit->second;
                for (std::size_t j = 1; j < piv.size(); ++j) {
                    auto [pc, pv] = piv[j];
                    auto wit = work.find(pc);
                    if (wit == work.end()) {
                        work.emplace(pc, -c * pv);
                    } else {
                        wit->second -= c * pv;
                        if (wit->second == 0) work.erase(wit);
                    }
                }
            }
            clean.emplace(it->first, std::move(row));
        }
        for (auto& [p, row] : clean) out.push_back(std::move(row));
        return out;
    }

    const std::map<int, SparseRow>& pivot_rows() const { return rows_; }

private:
    std::vector<std::string> ambient_;
    std::unordered_map<std::string, int> index_;
    std::map<int, SparseRow> rows_;  // pivot column -> row
};

/// A subspace of the free module on an ordered ambient basis, stored as a
/// reduced row echelon matrix of exact rationals.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(SpanBuilder b) : builder_(std::move(b)) {}

    static Subspace span(std::vector<std::string> ambient, const std::vector<FormalSum>& vectors) {
        SpanBuilder b(std::move(ambient));
        for (const auto& v : vectors) b.insert(v);
        return Subspace(std::move(b));
    }

    int rank() const { return builder_ ? builder_->rank() : 0; }
    int dim() const { return builder_ ? builder_->dim() : 0; }
    int quotient_dim() const { return dim() - rank(); }
    const std::vector<std::string>& ambient() const {
        static const std::vector<std::string> kEmpty;
        return builder_ ? builder_->ambient() : kEmpty;
    }

    bool contains(const FormalSum& v) const {
        if (!builder_) return v.is_zero();
        return builder_->contains(v);
    }

    /// Canonical residual of v modulo this subspace.
    FormalSum reduce(const FormalSum& v) const {
        if (!builder_) return v;
        return builder_->to_sum(builder_->reduce(builder_->to_row(v)));
    }

    /// Rows in reduced echelon form, as formal sums.
    std::vector<FormalSum> basis() const {
        std::vector<FormalSum> out;
        if (!builder_) return out;
        for (const auto& row : builder_->rref_rows()) out.push_back(builder_->to_sum(row));
        return out;
    }

    const SpanBuilder& raw() const {
        if (!builder_) throw std::logic_error("Subspace: empty");
        return *builder_;
    }
    bool has_ambient() const { return builder_.has_value(); }

private:
    std::optional<SpanBuilder> builder_;
};

/// Basis of { c : sum_i c_i v_i = 0 } for vectors v_i over `ambient`.
/// Each kernel element is returned as its coefficient vector. The optional
/// callback is polled between insertions (used for budget checks).
std::vector<std::vector<Scalar>> nullspace_of_vectors(
    const std::vector<std::string>& ambient, const std::vector<FormalSum>& vectors,
    const std::function<void()>& poll = {});

}  // namespace operadcalc
