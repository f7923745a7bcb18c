#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace havnfp {

/// Dense index into one of the instance collections. The tag keeps a server
/// index from being passed where a request index is expected.
template <typename Tag>
struct Id {
    std::uint32_t value = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}

    [[nodiscard]] constexpr std::size_t index() const { return value; }

    friend constexpr auto operator<=>(Id, Id) = default;
};

struct ClusterTag {};
struct ServerTag {};
struct VnfTypeTag {};
struct AccessPointTag {};
struct RequestTag {};

using ClusterId = Id<ClusterTag>;
using ServerId = Id<ServerTag>;
using VnfTypeId = Id<VnfTypeTag>;
using AccessPointId = Id<AccessPointTag>;
using RequestId = Id<RequestTag>;

}  // namespace havnfp

template <typename Tag>
struct std::hash<havnfp::Id<Tag>> {
    std::size_t operator()(havnfp::Id<Tag> id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
