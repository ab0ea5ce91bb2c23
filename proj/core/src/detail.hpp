#pragma once

#include <optional>

#include "qwjoin/state_transfer.hpp"

namespace qwjoin::detail {

void check_partitions(const char* what, const std::optional<SupportPartition>& closed,
                      const std::optional<SupportPartition>& brute);
void check_certificates(const char* what, PSTCertificate& closed, const PSTCertificate& brute);

}  // namespace qwjoin::detail
