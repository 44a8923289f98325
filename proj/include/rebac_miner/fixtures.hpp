#pragma once

#include "rebac_miner/policy.hpp"

namespace rebac_miner {

/// Students and documents of a university department, with some
/// departments and document types unknown.
AclPolicy running_example_acl();

/// The two rules behind running_example_acl(): students read documents of
/// their department, and everyone reads handbooks.
Policy running_example_policy();

}  // namespace rebac_miner
