#include "qd/domain.hpp"

#include "qd/errors.hpp"

namespace qd {

void Domain::mutate_gene(std::vector<double>&, int, Rng&) const {
    throw ConfigError("domain '" + name() + "' has no discrete mutation alphabet");
}

}  // namespace qd
