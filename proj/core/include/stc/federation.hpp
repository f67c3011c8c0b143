#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <span>
#include <vector>

#include "stc/codec.hpp"
#include "stc/compress.hpp"
#include "stc/data.hpp"
#include "stc/model.hpp"

namespace stc {

enum class Method { baseline, fedavg, signsgd, topk, stc };

const char* method_name(Method m);
Method parse_method(const std::string& name); // ConfigError on unknown name

// Full description of the learning environment. Defaults follow the base
// configuration (100 clients, 10% participation, 10 classes per client,
// batch 20, balanced volumes).
struct FedConfig {
    ModelKind model = ModelKind::logreg;
    std::uint32_t num_clients = 100;
    double participation = 0.1; // eta in (0, 1]
    std::uint32_t classes_per_client = 10;
    std::uint32_t batch_size = 20;
    double gamma = 1.0; // volume balancedness
    double alpha = 0.1; // volume floor
    Method method = Method::stc;
    double p_up = 1.0 / 400.0;
    double p_down = 1.0 / 400.0;
    std::uint32_t delay_n = 1; // local iterations per round
    float lr = 0.04f;
    float momentum = 0.0f;
    float signsgd_delta = 0.0002f; // coordinate-wise step
    std::uint64_t total_iterations = 5000;
    std::uint32_t eval_every = 100; // iterations between test evaluations
    std::uint32_t cache_horizon = 50; // rounds of partial sums kept
    std::uint64_t seed = 1;

    std::uint32_t participants_per_round() const;
    void validate() const; // ConfigError names the offending field
};

// Cumulative upload/download bit counts, per client and global.
struct CommLedger {
    std::vector<std::uint64_t> bits_up;
    std::vector<std::uint64_t> bits_down;
    std::uint64_t total_up = 0;
    std::uint64_t total_down = 0;

    struct RoundBits {
        std::uint64_t up = 0;
        std::uint64_t down = 0;
    };
    std::vector<RoundBits> per_round;

    explicit CommLedger(std::uint32_t num_clients = 0)
        : bits_up(num_clients, 0), bits_down(num_clients, 0) {}

    void charge_up(std::uint32_t client, std::uint64_t bits) {
        bits_up[client] += bits;
        total_up += bits;
    }
    void charge_down(std::uint32_t client, std::uint64_t bits) {
        bits_down[client] += bits;
        total_down += bits;
    }
};

struct ClientRecord {
    TrainState train;       // model replica, momentum buffer, batch sampler
    FlatTensor residual;    // error accumulator (sparsified methods)
    std::uint64_t last_synced_round = 0;
    std::vector<std::uint32_t> shard;
};

struct RoundUpdate {
    FlatTensor dense;             // applied global update
    std::uint64_t broadcast_bits; // encoded size of the round broadcast
};

struct ServerState {
    FlatTensor weights;
    FlatTensor residual;
    std::deque<RoundUpdate> recent; // last <= cache_horizon updates, oldest first
    std::uint64_t round = 0;

    // P(s): sum of the last s global updates.
    FlatTensor partial_sum(std::uint64_t s) const;
};

// Sparse tensor with full-precision values: Golomb-coded positions followed
// by one 32-bit value per nonzero. Used for cached partial sums and top-k
// payloads, where entries are not ternary.
struct SparseFloatEncoded {
    std::uint32_t len = 0;
    std::uint32_t count = 0;
    std::uint8_t bstar = 1;
    BitStream payload;

    std::uint64_t total_bits() const { return 8 + payload.size_bits(); }
};

SparseFloatEncoded sparse_float_encode(const FlatTensor& t);
FlatTensor sparse_float_decode(const SparseFloatEncoded& e);

struct RunRecord {
    std::uint64_t round = 0;
    std::uint64_t iterations = 0;
    double test_accuracy = 0.0;
    std::uint64_t bits_up_cum = 0;
    std::uint64_t bits_down_cum = 0;
    double wall_seconds = 0.0;
};

void write_run_csv(std::ostream& out, std::span<const RunRecord> records);

std::uint64_t client_sampler_seed(std::uint64_t seed, std::uint32_t client);

// Uniform subset of ceil(eta * N) clients, deterministic in (seed, round),
// returned ascending.
std::vector<std::uint32_t> select_participants(std::uint64_t round, const FedConfig& cfg);

class FederatedRun {
public:
    FederatedRun(const FedConfig& cfg, const Dataset& train, const Dataset& test);

    // One full communication round: participant sync, local training,
    // upstream compression, server reduction, downstream compression.
    void run_round();

    // Synchronize one client with the server; returns the metered download
    // bits. Exposed for the caching-soundness checks.
    std::uint64_t sync_client(std::uint32_t client);

    double evaluate_current() const;

    const FedConfig& config() const { return cfg_; }
    const ModelSpec& spec() const { return spec_; }
    const InputTransform& transform() const { return transform_; }
    const ServerState& server() const { return server_; }
    const FlatTensor& initial_weights() const { return initial_weights_; }
    const std::vector<ClientRecord>& clients() const { return clients_; }
    std::vector<ClientRecord>& clients() { return clients_; }
    const CommLedger& ledger() const { return ledger_; }
    std::uint64_t iterations_done() const { return iterations_done_; }
    std::uint64_t gradient_evaluations() const { return gradient_evals_; }
    // Mean of the decoded client updates from the last round (pre-compression
    // server input; the vote-scaled step for signSGD).
    const FlatTensor& last_round_mean() const { return last_mean_; }

private:
    FedConfig cfg_;
    const Dataset& train_;
    const Dataset& test_;
    ModelSpec spec_;
    InputTransform transform_;
    ServerState server_;
    FlatTensor initial_weights_;
    std::vector<ClientRecord> clients_;
    CommLedger ledger_;
    FlatTensor last_mean_;
    std::uint64_t iterations_done_ = 0;
    std::uint64_t gradient_evals_ = 0;
};

// Drive rounds until the iteration budget is consumed, evaluating at every
// eval_every iteration boundary (and at the end).
std::vector<RunRecord> run_experiment(const FedConfig& cfg, const Dataset& train,
                                      const Dataset& test);

} // namespace stc
