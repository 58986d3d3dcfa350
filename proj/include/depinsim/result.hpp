#pragma once

#include <cassert>
#include <optional>
#include <utility>

namespace depinsim {

// Minimal ok-or-error carrier used by operations whose failures are part of
// the contract (registry lifecycle errors, ledger errors, parse failures).
template <typename T, typename E>
class Result {
public:
    static Result ok(T value) {
        Result r;
        r.value_ = std::move(value);
        return r;
    }
    static Result fail(E error) {
        Result r;
        r.error_ = std::move(error);
        return r;
    }

    bool has_value() const { return value_.has_value(); }
    explicit operator bool() const { return has_value(); }

    const T& value() const {
        assert(value_);
        return *value_;
    }
    T& value() {
        assert(value_);
        return *value_;
    }
    const E& error() const {
        assert(error_);
        return *error_;
    }

private:
    Result() = default;
    std::optional<T> value_;
    std::optional<E> error_;
};

}  // namespace depinsim
