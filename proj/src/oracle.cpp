#include "lintest/oracle.hpp"

#include <string>

namespace lintest {

ScalarOracle::ScalarOracle(DomainParams domain, bool domain_extension)
    : domain_(domain), domain_extension_(domain_extension) {}

Int ScalarOracle::query(const Int& x) const {
    queries_.fetch_add(1, std::memory_order_relaxed);
    bool in_domain = domain_.contains(x);
    if (!in_domain && !(domain_extension_ && x == domain_.size()))
        throw OracleError("query outside the program's domain: " + x.str());
    try {
        return value_at(x);
    } catch (const OracleError&) {
        throw;
    } catch (const std::exception& e) {
        throw OracleError(std::string("program raised during evaluation: ") + e.what());
    }
}

VectorOracle::VectorOracle(VectorDomainParams domain) : domain_(domain) {}

Int VectorOracle::query(const std::vector<Int>& x) const {
    queries_.fetch_add(1, std::memory_order_relaxed);
    if (x.size() != domain_.dimension())
        throw DimensionMismatch("query dimension " + std::to_string(x.size()) +
                                " does not match domain dimension " +
                                std::to_string(domain_.dimension()));
    if (!domain_.contains(x))
        throw OracleError("query outside the program's domain");
    try {
        return value_at(x);
    } catch (const OracleError&) {
        throw;
    } catch (const DimensionMismatch&) {
        throw;
    } catch (const std::exception& e) {
        throw OracleError(std::string("program raised during evaluation: ") + e.what());
    }
}

LinearScalarOracle::LinearScalarOracle(LinearSpec spec)
    : ScalarOracle(spec.domain(), /*domain_extension=*/true), spec_(std::move(spec)) {}

Int LinearScalarOracle::value_at(const Int& x) const {
    return spec_.apply(x);
}

LinearVectorOracle::LinearVectorOracle(LinearSpec spec)
    : VectorOracle(spec.vector_domain()), spec_(std::move(spec)) {}

Int LinearVectorOracle::value_at(const std::vector<Int>& x) const {
    return spec_.apply(x);
}

FunctionScalarOracle::FunctionScalarOracle(DomainParams domain, bool domain_extension,
                                           std::function<Int(const Int&)> fn)
    : ScalarOracle(domain, domain_extension), fn_(std::move(fn)) {}

Int FunctionScalarOracle::value_at(const Int& x) const {
    return fn_(x);
}

FunctionVectorOracle::FunctionVectorOracle(VectorDomainParams domain,
                                           std::function<Int(const std::vector<Int>&)> fn)
    : VectorOracle(domain), fn_(std::move(fn)) {}

Int FunctionVectorOracle::value_at(const std::vector<Int>& x) const {
    return fn_(x);
}

}  // namespace lintest
