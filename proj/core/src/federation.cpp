#include "stc/federation.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "stc/partition.hpp"

namespace stc {

const char* method_name(Method m) {
    switch (m) {
        case Method::baseline: return "baseline";
        case Method::fedavg: return "fedavg";
        case Method::signsgd: return "signsgd";
        case Method::topk: return "topk";
        case Method::stc: return "stc";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    if (name == "baseline") return Method::baseline;
    if (name == "fedavg") return Method::fedavg;
    if (name == "signsgd") return Method::signsgd;
    if (name == "topk") return Method::topk;
    if (name == "stc") return Method::stc;
    throw ConfigError("method: unknown value '" + name + "'");
}

std::uint32_t FedConfig::participants_per_round() const {
    // epsilon guards against 0.1 * 100 -> 10.000000000000002
    auto n = static_cast<std::uint32_t>(
        std::ceil(participation * static_cast<double>(num_clients) - 1e-9));
    if (n < 1) n = 1;
    if (n > num_clients) n = num_clients;
    return n;
}

void FedConfig::validate() const {
    if (num_clients < 1) throw ConfigError("num_clients must be >= 1");
    if (!(participation > 0.0 && participation <= 1.0))
        throw ConfigError("participation must be in (0, 1]");
    if (classes_per_client < 1) throw ConfigError("classes_per_client must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in (0, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in [0, 1]");
    if (!(lr > 0.0f) || !std::isfinite(lr)) throw ConfigError("lr must be positive");
    if (!(momentum >= 0.0f && momentum < 1.0f)) throw ConfigError("momentum must be in [0, 1)");
    if (delay_n < 1) throw ConfigError("delay_n must be >= 1");
    if (total_iterations < 1) throw ConfigError("total_iterations must be >= 1");
    if (total_iterations % delay_n != 0)
        throw ConfigError("total_iterations must be divisible by delay_n");
    if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
    if (method == Method::stc || method == Method::topk) {
        if (!(p_up > 0.0 && p_up <= 1.0)) throw ConfigError("p_up must be in (0, 1]");
        if (!(p_down > 0.0 && p_down <= 1.0)) throw ConfigError("p_down must be in (0, 1]");
    }
    if (method == Method::signsgd && !(signsgd_delta > 0.0f))
        throw ConfigError("signsgd_delta must be positive");
}

FlatTensor ServerState::partial_sum(std::uint64_t s) const {
    FlatTensor acc(weights.len());
    for (std::size_t i = recent.size() - s; i < recent.size(); ++i)
        add_in_place(acc, recent[i].dense);
    return acc;
}

SparseFloatEncoded sparse_float_encode(const FlatTensor& t) {
    SparseFloatEncoded e;
    e.len = static_cast<std::uint32_t>(t.len());
    std::vector<std::uint32_t> positions;
    for (std::uint32_t i = 0; i < t.len(); ++i)
        if (t[i] != 0.0f) positions.push_back(i);
    e.count = static_cast<std::uint32_t>(positions.size());
    if (e.count > 0 && e.count < e.len) {
        double p_eff = static_cast<double>(e.count) / static_cast<double>(e.len);
        e.bstar = static_cast<std::uint8_t>(golomb_param(p_eff));
    }
    golomb_encode_positions(e.payload, positions, e.bstar);
    for (std::uint32_t i : positions)
        e.payload.push_bits(std::bit_cast<std::uint32_t>(t[i]), 32);
    return e;
}

FlatTensor sparse_float_decode(const SparseFloatEncoded& e) {
    BitReader reader(e.payload);
    std::vector<std::uint32_t> positions = golomb_decode_positions(reader, e.len, e.count, e.bstar);
    FlatTensor out(e.len);
    for (std::uint32_t i : positions)
        out[i] = std::bit_cast<float>(static_cast<std::uint32_t>(reader.read_bits(32)));
    if (reader.remaining() != 0) throw DecodeError("sparse-float: trailing bits in payload");
    return out;
}

void write_run_csv(std::ostream& out, std::span<const RunRecord> records) {
    out << "round,iterations,test_accuracy,bits_up_cum,bits_down_cum,wall_seconds\n";
    char line[160];
    for (const RunRecord& r : records) {
        std::snprintf(line, sizeof(line), "%llu,%llu,%.6f,%llu,%llu,%.3f\n",
                      static_cast<unsigned long long>(r.round),
                      static_cast<unsigned long long>(r.iterations), r.test_accuracy,
                      static_cast<unsigned long long>(r.bits_up_cum),
                      static_cast<unsigned long long>(r.bits_down_cum), r.wall_seconds);
        out << line;
    }
}

std::uint64_t client_sampler_seed(std::uint64_t seed, std::uint32_t client) {
    return mix_seed(mix_seed(seed, 0xc11e27), client);
}

std::vector<std::uint32_t> select_participants(std::uint64_t round, const FedConfig& cfg) {
    Rng rng(mix_seed(mix_seed(cfg.seed, 0x5e1ec7), round));
    return rng.sample_without_replacement(cfg.num_clients, cfg.participants_per_round());
}

FederatedRun::FederatedRun(const FedConfig& cfg, const Dataset& train, const Dataset& test)
    : cfg_(cfg), train_(train), test_(test), ledger_(cfg.num_clients) {
    cfg_.validate();
    if (train_.size() == 0) throw DataError("federation: empty training set");

    spec_.kind = cfg_.model;
    spec_.input_dim = train_.dim;
    spec_.num_classes = train_.num_classes;
    transform_ = InputTransform::standardize(train_);

    SplitSpec ss;
    ss.num_clients = cfg_.num_clients;
    ss.classes_per_client = cfg_.classes_per_client;
    ss.num_classes = train_.num_classes;
    ss.fractions = volume_fractions(cfg_.alpha, cfg_.gamma, cfg_.num_clients);
    ss.seed = cfg_.seed;
    auto shards = split(train_, ss);

    server_.weights = init_params(spec_, cfg_.seed);
    server_.residual = FlatTensor(spec_.param_count());
    initial_weights_ = server_.weights;

    clients_.resize(cfg_.num_clients);
    for (std::uint32_t i = 0; i < cfg_.num_clients; ++i) {
        clients_[i].train.sgd.params = server_.weights;
        clients_[i].train.sgd.momentum = FlatTensor(spec_.param_count());
        clients_[i].residual = FlatTensor(spec_.param_count());
        clients_[i].shard = std::move(shards[i]);
    }
}

std::uint64_t FederatedRun::sync_client(std::uint32_t client) {
    ClientRecord& cl = clients_[client];
    if (cl.last_synced_round > server_.round)
        throw ProtocolError("sync: client ahead of server");
    const std::uint64_t s = server_.round - cl.last_synced_round;
    cl.last_synced_round = server_.round;
    if (s == 0) return 0;

    const auto len = static_cast<std::uint64_t>(spec_.param_count());
    const std::uint64_t dense_bits = 32ull * len;

    switch (cfg_.method) {
        case Method::baseline:
        case Method::fedavg:
            cl.train.sgd.params = server_.weights;
            return dense_bits;
        case Method::signsgd: {
            if (s > cfg_.cache_horizon || s > server_.recent.size()) {
                cl.train.sgd.params = server_.weights;
                return dense_bits;
            }
            add_in_place(cl.train.sgd.params, server_.partial_sum(s));
            if (s == 1) return len; // one sign bit per coordinate
            // coordinate vote sums lie in {-s..s}: fixed-width replay
            auto width = static_cast<std::uint64_t>(std::ceil(std::log2(2.0 * s + 1.0)));
            return std::min(len * width, dense_bits);
        }
        case Method::topk:
        case Method::stc: {
            if (s > cfg_.cache_horizon || s > server_.recent.size()) {
                cl.train.sgd.params = server_.weights;
                return dense_bits;
            }
            if (cfg_.method == Method::stc && s == 1) {
                // the cached single-round sum is exactly the last broadcast
                add_in_place(cl.train.sgd.params, server_.recent.back().dense);
                return server_.recent.back().broadcast_bits;
            }
            FlatTensor p = server_.partial_sum(s);
            SparseFloatEncoded enc = sparse_float_encode(p);
            if (enc.total_bits() >= dense_bits) {
                cl.train.sgd.params = server_.weights;
                return dense_bits;
            }
            add_in_place(cl.train.sgd.params, sparse_float_decode(enc));
            return enc.total_bits();
        }
    }
    throw ProtocolError("sync: unreachable");
}

void FederatedRun::run_round() {
    const std::vector<std::uint32_t> participants = select_participants(server_.round, cfg_);
    const auto len = static_cast<std::uint64_t>(spec_.param_count());
    CommLedger::RoundBits rb;

    std::vector<FlatTensor> contributions;
    std::vector<SignVec> votes;
    contributions.reserve(participants.size());

    const OptimConfig oc{cfg_.lr, cfg_.momentum, cfg_.batch_size};
    for (std::uint32_t i : participants) {
        ClientRecord& cl = clients_[i];
        std::uint64_t down = sync_client(i);
        ledger_.charge_down(i, down);
        rb.down += down;

        FlatTensor synced = cl.train.sgd.params;
        FlatTensor delta = local_round(cl.train, oc, spec_, train_, cl.shard, transform_,
                                       cfg_.delay_n, client_sampler_seed(cfg_.seed, i));
        // the replica keeps tracking the global model; local SGD output only
        // feeds the uploaded update
        cl.train.sgd.params = std::move(synced);
        gradient_evals_ += cfg_.delay_n;

        std::uint64_t up = 0;
        switch (cfg_.method) {
            case Method::baseline:
            case Method::fedavg:
                contributions.push_back(std::move(delta));
                up = 32ull * len;
                break;
            case Method::signsgd:
                votes.push_back(sign_compress(delta));
                up = len;
                break;
            case Method::stc: {
                FlatTensor corrected = add(cl.residual, delta);
                SparseTernaryUpdate u = stc_compress(corrected, cfg_.p_up);
                cl.residual = sub(corrected, u.densify());
                EncodedUpdate enc = golomb_encode(u, cfg_.p_up);
                contributions.push_back(golomb_decode(enc).densify());
                up = enc.total_bits();
                break;
            }
            case Method::topk: {
                FlatTensor corrected = add(cl.residual, delta);
                FlatTensor kept = top_k_sparsify(corrected, cfg_.p_up);
                cl.residual = sub(corrected, kept);
                SparseFloatEncoded enc = sparse_float_encode(kept);
                contributions.push_back(sparse_float_decode(enc));
                up = enc.total_bits();
                break;
            }
        }
        ledger_.charge_up(i, up);
        rb.up += up;
    }

    FlatTensor global_update(len);
    std::uint64_t broadcast_bits = 0;
    if (cfg_.method == Method::signsgd) {
        SignVec vote = majority_vote(votes);
        for (std::size_t j = 0; j < len; ++j)
            global_update[j] = cfg_.signsgd_delta * static_cast<float>(vote[j]);
        last_mean_ = global_update;
        broadcast_bits = len;
    } else {
        // unweighted mean over participants, reduced in ascending client order
        std::vector<double> acc(len, 0.0);
        for (const FlatTensor& c : contributions)
            for (std::size_t j = 0; j < len; ++j) acc[j] += c[j];
        FlatTensor mean(len);
        const double inv = 1.0 / static_cast<double>(contributions.size());
        for (std::size_t j = 0; j < len; ++j) mean[j] = static_cast<float>(acc[j] * inv);
        last_mean_ = mean;

        switch (cfg_.method) {
            case Method::stc: {
                FlatTensor corrected = add(server_.residual, mean);
                SparseTernaryUpdate u = stc_compress(corrected, cfg_.p_down);
                server_.residual = sub(corrected, u.densify());
                EncodedUpdate enc = golomb_encode(u, cfg_.p_down);
                global_update = golomb_decode(enc).densify();
                broadcast_bits = enc.total_bits();
                break;
            }
            case Method::topk: {
                FlatTensor corrected = add(server_.residual, mean);
                FlatTensor kept = top_k_sparsify(corrected, cfg_.p_down);
                server_.residual = sub(corrected, kept);
                SparseFloatEncoded enc = sparse_float_encode(kept);
                global_update = sparse_float_decode(enc);
                broadcast_bits = enc.total_bits();
                break;
            }
            default:
                global_update = std::move(mean);
                broadcast_bits = 32ull * len;
                break;
        }
    }

    add_in_place(server_.weights, global_update);
    server_.recent.push_back({std::move(global_update), broadcast_bits});
    while (server_.recent.size() > cfg_.cache_horizon) server_.recent.pop_front();
    server_.round += 1;
    iterations_done_ += cfg_.delay_n;
    ledger_.per_round.push_back(rb);
}

double FederatedRun::evaluate_current() const {
    return evaluate(server_.weights, spec_, test_, transform_);
}

std::vector<RunRecord> run_experiment(const FedConfig& cfg, const Dataset& train,
                                      const Dataset& test) {
    FederatedRun run(cfg, train, test);
    std::vector<RunRecord> records;
    const std::uint64_t rounds = cfg.total_iterations / cfg.delay_n;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t r = 1; r <= rounds; ++r) {
        std::uint64_t before = run.iterations_done();
        run.run_round();
        std::uint64_t after = run.iterations_done();
        bool at_boundary = (after / cfg.eval_every) > (before / cfg.eval_every);
        if (at_boundary || r == rounds) {
            RunRecord rec;
            rec.round = r;
            rec.iterations = after;
            rec.test_accuracy = run.evaluate_current();
            rec.bits_up_cum = run.ledger().total_up;
            rec.bits_down_cum = run.ledger().total_down;
            rec.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            records.push_back(rec);
        }
    }
    return records;
}

} // namespace stc
