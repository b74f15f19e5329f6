#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace hutchinf {

// Finite prefix plus a constant tail anchor: the computable stand-in for a
// bounded sequence. at(k) returns prefix[k] for k < prefix length and the
// anchor for every index beyond.
template <class T>
class TailSeq {
public:
    TailSeq(std::vector<T> prefix, T anchor)
        : prefix_(std::move(prefix)), anchor_(std::move(anchor)) {}

    explicit TailSeq(T anchor) : anchor_(std::move(anchor)) {}

    static TailSeq constant(T value) { return TailSeq(std::move(value)); }

    const T& at(std::size_t k) const {
        return k < prefix_.size() ? prefix_[k] : anchor_;
    }
    std::size_t prefix_size() const { return prefix_.size(); }
    const std::vector<T>& prefix() const { return prefix_; }
    const T& anchor() const { return anchor_; }

    // New sequence with `value` at index 0 and this sequence shifted right.
    TailSeq prepended(T value) const {
        std::vector<T> p;
        p.reserve(prefix_.size() + 1);
        p.push_back(std::move(value));
        p.insert(p.end(), prefix_.begin(), prefix_.end());
        return TailSeq(std::move(p), anchor_);
    }

private:
    std::vector<T> prefix_;
    T anchor_;
};

}  // namespace hutchinf
