#pragma once

#include <map>
#include <vector>

namespace x0p {

struct GenusRecord {
    long N = 0;
    long g0 = 0;
    long nu = 0;
    long g0plus = 0;
};

void check_discriminant(long D);
long class_number(long D);
double class_number_upper_bound(long D);

long nu(long N);
long genus_X0(long N);
long genus_X0_plus(long N);
GenusRecord genus_record(long N);
double genus_lower_bound(long N);

// Largest N with genus_lower_bound(N) <= max_genus.
long level_cutoff(long max_genus);
// Scan limit used by enumerate_levels: the cutoff rounded up to a multiple of 100.
long scan_bound(long max_genus);

struct LevelTable {
    long max_genus = 0;
    long cutoff = 0;  // levels scanned: 1..cutoff
    std::map<long, std::vector<long>> prime;      // genus -> levels
    std::map<long, std::vector<long>> composite;  // genus -> levels
};

LevelTable enumerate_levels(long max_genus, unsigned jobs = 1);

// The tables printed in the literature for max_genus = 6.
const LevelTable& reference_levels();

}  // namespace x0p
