#include "rto/rng.hpp"

namespace rto {

Stream::Stream(std::uint64_t master_seed, std::uint64_t run_index, std::string_view purpose,
               std::initializer_list<std::uint64_t> entity) noexcept {
    std::uint64_t key = master_seed;
    std::uint64_t h = splitmix64(key);
    auto absorb = [&h](std::uint64_t v) {
        std::uint64_t s = h ^ v;
        h = splitmix64(s);
    };
    absorb(run_index);
    absorb(fnv1a(purpose));
    absorb(entity.size());
    for (auto e : entity) absorb(e);

    std::uint64_t s = h;
    for (auto& word : state_) word = splitmix64(s);
}

}  // namespace rto
