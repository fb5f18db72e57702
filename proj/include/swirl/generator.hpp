#ifndef SWIRL_GENERATOR_HPP
#define SWIRL_GENERATOR_HPP

#include "swirl/workflow.hpp"

namespace swirl {

/// The worked three-step example instance: s1 on ld producing d1/d2,
/// s2 on l1 consuming d1, s3 on {l2,l3} consuming d2.
DistributedWorkflowInstance fig1_instance();

/// Parameters of the generated genome-analysis pipeline instance:
/// n individuals steps over a locations, one merge step, one sifting step,
/// m overlap steps over b locations, m frequency steps over c locations.
struct GenomeParams {
    int n = 1;
    int m = 1;
    int a = 1;
    int b = 1;
    int c = 1;
};

DistributedWorkflowInstance gen_1000genomes(const GenomeParams& p);

}  // namespace swirl

#endif
