#pragma once

/*!
  \file spmd.hpp
  \brief In-process SPMD worker groups: launch, barrier and two-sided
  nonblocking messages.

  Workers are threads of one process; the interconnect of a cluster is
  emulated by shared memory. Measured differences between communication
  patterns therefore reflect synchronisation and copy costs, not wire latency.

  A failing worker cancels its group: peers blocked in a barrier or a
  message wait are released with GroupCancelled, and spawn_spmd reports the
  first failure as WorkerPanic.
*/

#include <eulerpar/errors.hpp>

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <tuple>
#include <type_traits>
#include <vector>

namespace eulerpar::comm {

struct WorkerStats {
    std::size_t barriers = 0;
    std::size_t sends = 0;
    std::size_t recvs = 0;
    std::size_t bytes_sent = 0;
};

//! Handle for a pending send or receive.
struct Ticket {
    enum class Kind { send, recv };
    Kind kind = Kind::send;
    std::size_t src = 0;
    std::size_t dst = 0;
    int tag = 0;
    std::uint64_t seq = 0;
    std::byte* buffer = nullptr;
    std::size_t bytes = 0;
    bool complete = false;
};

namespace detail {

class GroupState {
  public:
    explicit GroupState(std::size_t n) : n_(n) {}

    std::size_t size() const noexcept { return n_; }

    void barrier()
    {
        std::unique_lock lock(barrier_mutex_);
        if (cancelled_)
            throw GroupCancelled();
        const std::uint64_t gen = generation_;
        if (++arrived_ == n_) {
            arrived_ = 0;
            ++generation_;
            ++episodes_;
            barrier_cv_.notify_all();
            return;
        }
        barrier_cv_.wait(lock, [&] { return generation_ != gen || cancelled_; });
        if (generation_ == gen)
            throw GroupCancelled();
    }

    std::size_t barrier_episodes() const
    {
        std::lock_guard lock(barrier_mutex_);
        return episodes_;
    }

    void cancel()
    {
        {
            std::lock_guard lock(barrier_mutex_);
            cancelled_ = true;
        }
        barrier_cv_.notify_all();
        {
            std::lock_guard lock(mail_mutex_);
            mail_cancelled_ = true;
        }
        mail_cv_.notify_all();
    }

    void post(std::size_t src, std::size_t dst, int tag, std::vector<std::byte> payload)
    {
        {
            std::lock_guard lock(mail_mutex_);
            Channel& ch = channels_[{src, dst, tag}];
            ch.queue.emplace(ch.sent++, std::move(payload));
        }
        mail_cv_.notify_all();
    }

    std::uint64_t reserve_receive(std::size_t src, std::size_t dst, int tag)
    {
        std::lock_guard lock(mail_mutex_);
        return channels_[{src, dst, tag}].posted++;
    }

    std::vector<std::byte> take(std::size_t src, std::size_t dst, int tag, std::uint64_t seq)
    {
        std::unique_lock lock(mail_mutex_);
        Channel& ch = channels_[{src, dst, tag}];
        mail_cv_.wait(lock, [&] { return ch.queue.count(seq) != 0 || mail_cancelled_; });
        auto it = ch.queue.find(seq);
        if (it == ch.queue.end())
            throw GroupCancelled();
        std::vector<std::byte> payload = std::move(it->second);
        ch.queue.erase(it);
        return payload;
    }

    //! Messages that were sent but never received.
    std::size_t orphaned() const
    {
        std::lock_guard lock(mail_mutex_);
        std::size_t count = 0;
        for (const auto& [key, ch] : channels_)
            count += ch.queue.size();
        return count;
    }

  private:
    struct Channel {
        std::uint64_t sent = 0;
        std::uint64_t posted = 0;
        std::map<std::uint64_t, std::vector<std::byte>> queue;
    };

    std::size_t n_;

    mutable std::mutex barrier_mutex_;
    std::condition_variable barrier_cv_;
    std::size_t arrived_ = 0;
    std::uint64_t generation_ = 0;
    std::size_t episodes_ = 0;
    bool cancelled_ = false;

    mutable std::mutex mail_mutex_;
    std::condition_variable mail_cv_;
    std::map<std::tuple<std::size_t, std::size_t, int>, Channel> channels_;
    bool mail_cancelled_ = false;
};

}  // namespace detail

//! A worker's view of its group: identity, barrier and message endpoint.
class Worker {
  public:
    Worker(detail::GroupState& group, std::size_t id) : group_(&group), id_(id) {}

    std::size_t id() const noexcept { return id_; }
    std::size_t size() const noexcept { return group_->size(); }

    //! Returns once every worker has entered; writes made before entry are
    //! visible to all workers afterwards.
    void barrier()
    {
        group_->barrier();
        ++stats_.barriers;
    }

    //! Eager send: the payload is copied out before returning.
    template <class T>
    Ticket send_async(std::size_t dest, int tag, std::span<const T> payload)
    {
        static_assert(std::is_trivially_copyable_v<T>);
        check_peer(dest);
        std::vector<std::byte> bytes(payload.size_bytes());
        if (!bytes.empty())
            std::memcpy(bytes.data(), payload.data(), bytes.size());
        group_->post(id_, dest, tag, std::move(bytes));
        ++stats_.sends;
        stats_.bytes_sent += payload.size_bytes();
        Ticket t;
        t.kind = Ticket::Kind::send;
        t.src = id_;
        t.dst = dest;
        t.tag = tag;
        t.complete = true;
        return t;
    }

    template <class T>
    Ticket send_async(std::size_t dest, int tag, const std::vector<T>& payload)
    {
        return send_async(dest, tag, std::span<const T>(payload));
    }

    //! Post a receive; `buffer` must stay alive until the ticket is waited on.
    template <class T>
    Ticket recv_async(std::size_t src, int tag, std::span<T> buffer)
    {
        static_assert(std::is_trivially_copyable_v<T>);
        check_peer(src);
        Ticket t;
        t.kind = Ticket::Kind::recv;
        t.src = src;
        t.dst = id_;
        t.tag = tag;
        t.seq = group_->reserve_receive(src, id_, tag);
        t.buffer = reinterpret_cast<std::byte*>(buffer.data());
        t.bytes = buffer.size_bytes();
        ++stats_.recvs;
        return t;
    }

    void wait_all(std::span<Ticket> tickets)
    {
        for (Ticket& t : tickets) {
            if (t.complete)
                continue;
            std::vector<std::byte> payload = group_->take(t.src, t.dst, t.tag, t.seq);
            if (payload.size() != t.bytes)
                throw MessageSizeMismatch("message from " + std::to_string(t.src) + " tag " +
                                          std::to_string(t.tag) + " has " +
                                          std::to_string(payload.size()) + " bytes, expected " +
                                          std::to_string(t.bytes));
            if (!payload.empty())
                std::memcpy(t.buffer, payload.data(), payload.size());
            t.complete = true;
        }
    }

    void wait_all(std::vector<Ticket>& tickets) { wait_all(std::span<Ticket>(tickets)); }

    const WorkerStats& stats() const noexcept { return stats_; }

  private:
    void check_peer(std::size_t peer) const
    {
        if (peer >= size())
            throw InvalidArgument("worker " + std::to_string(peer) + " is not in a group of " +
                                  std::to_string(size()));
    }

    detail::GroupState* group_;
    std::size_t id_;
    WorkerStats stats_;
};

//! Group-level counters collected by spawn_spmd.
struct SpmdReport {
    std::vector<WorkerStats> workers;
    std::size_t barrier_episodes = 0;
};

namespace detail {

inline std::string describe(const std::exception_ptr& e)
{
    try {
        std::rethrow_exception(e);
    } catch (const std::exception& ex) {
        return ex.what();
    } catch (...) {
        return "unknown exception";
    }
}

}  // namespace detail

/*!
  Run `kernel(worker)` on n concurrent workers and wait for all of them.
  Returns the per-worker results in id order (nothing for void kernels).
*/
template <class Kernel>
auto spawn_spmd(std::size_t n, Kernel kernel, SpmdReport* report = nullptr)
{
    using Result = std::invoke_result_t<Kernel&, Worker&>;
    constexpr bool is_void = std::is_void_v<Result>;
    using Slot = std::conditional_t<is_void, char, std::optional<std::conditional_t<is_void, char, Result>>>;

    if (n < 1)
        throw InvalidArgument("spawn_spmd: need at least one worker");

    detail::GroupState group(n);
    std::vector<Slot> results(n);
    std::vector<WorkerStats> stats(n);

    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::size_t first_worker = 0;

    auto body = [&](std::size_t id) {
        Worker self(group, id);
        try {
            if constexpr (is_void)
                kernel(self);
            else
                results[id].emplace(kernel(self));
        } catch (const GroupCancelled&) {
        } catch (...) {
            {
                std::lock_guard lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                    first_worker = id;
                }
            }
            group.cancel();
        }
        stats[id] = self.stats();
    };

    {
        std::vector<std::jthread> threads;
        threads.reserve(n - 1);
        for (std::size_t id = 1; id < n; ++id)
            threads.emplace_back(body, id);
        body(0);
    }

    if (first_error)
        throw WorkerPanic(first_worker, first_error, detail::describe(first_error));
    if (const std::size_t orphans = group.orphaned())
        throw OrphanMessage(std::to_string(orphans) + " message(s) never received");

    if (report) {
        report->workers = stats;
        report->barrier_episodes = group.barrier_episodes();
    }

    if constexpr (!is_void) {
        std::vector<Result> out;
        out.reserve(n);
        for (auto& r : results)
            out.push_back(std::move(*r));
        return out;
    }
}

}  // namespace eulerpar::comm
