// Acceptance suite runner: executes the verification criteria and prints one
// PASS/FAIL line per criterion. With no arguments runs all of them; otherwise
// each argument is a criterion id.
#include "rdlab/acceptance.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty()) ids = rdlab::acceptance::all_ids();
    int failures = rdlab::acceptance::run(ids, rdlab::Config::defaults(), stdout);
    std::printf("%zu criteria, %d failure(s)\n", ids.size(), failures);
    return failures == 0 ? 0 : 1;
}
