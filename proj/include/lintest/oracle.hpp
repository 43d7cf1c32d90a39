#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "lintest/domain.hpp"
#include "lintest/errors.hpp"
#include "lintest/ints.hpp"

namespace lintest {

// The program under test, seen as a black box.  Testers may only call
// query(); every call bumps the query counter exactly once, which is how the
// query-complexity accounting in reports and tests is enforced.
//
// supports_domain_extension() advertises whether the program accepts the one
// out-of-domain point 2^n that the divisibility-based general test needs.
class ScalarOracle {
public:
    ScalarOracle(DomainParams domain, bool domain_extension);
    virtual ~ScalarOracle() = default;

    ScalarOracle(const ScalarOracle&) = delete;
    ScalarOracle& operator=(const ScalarOracle&) = delete;

    const DomainParams& domain() const { return domain_; }
    bool supports_domain_extension() const { return domain_extension_; }

    // Evaluate the program at x.  x must lie in D_n, or equal 2^n when the
    // oracle supports the extension; anything else raises OracleError, as
    // does any exception escaping the program itself.
    Int query(const Int& x) const;

    std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }
    void reset_query_count() const { queries_.store(0, std::memory_order_relaxed); }

protected:
    virtual Int value_at(const Int& x) const = 0;

private:
    DomainParams domain_;
    bool domain_extension_;
    mutable std::atomic<std::uint64_t> queries_{0};
};

// Vector-domain counterpart.  No domain extension: the divisibility trick is
// a scalar-only device.
class VectorOracle {
public:
    explicit VectorOracle(VectorDomainParams domain);
    virtual ~VectorOracle() = default;

    VectorOracle(const VectorOracle&) = delete;
    VectorOracle& operator=(const VectorOracle&) = delete;

    const VectorDomainParams& domain() const { return domain_; }

    Int query(const std::vector<Int>& x) const;

    std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }
    void reset_query_count() const { queries_.store(0, std::memory_order_relaxed); }

protected:
    virtual Int value_at(const std::vector<Int>& x) const = 0;

private:
    VectorDomainParams domain_;
    mutable std::atomic<std::uint64_t> queries_{0};
};

// A correct program: evaluates the claimed linear function exactly.  Used to
// validate soundness (testers must pass it) and as the reference inside
// simulated faulty programs.
class LinearScalarOracle final : public ScalarOracle {
public:
    explicit LinearScalarOracle(LinearSpec spec);

private:
    Int value_at(const Int& x) const override;
    LinearSpec spec_;
};

class LinearVectorOracle final : public VectorOracle {
public:
    explicit LinearVectorOracle(LinearSpec spec);

private:
    Int value_at(const std::vector<Int>& x) const override;
    LinearSpec spec_;
};

// Wraps an arbitrary callable as an oracle; handy in tests.
class FunctionScalarOracle final : public ScalarOracle {
public:
    FunctionScalarOracle(DomainParams domain, bool domain_extension,
                         std::function<Int(const Int&)> fn);

private:
    Int value_at(const Int& x) const override;
    std::function<Int(const Int&)> fn_;
};

class FunctionVectorOracle final : public VectorOracle {
public:
    FunctionVectorOracle(VectorDomainParams domain,
                         std::function<Int(const std::vector<Int>&)> fn);

private:
    Int value_at(const std::vector<Int>& x) const override;
    std::function<Int(const std::vector<Int>&)> fn_;
};

}  // namespace lintest
