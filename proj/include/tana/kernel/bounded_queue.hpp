#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <string_view>

#include "tana/error.hpp"

namespace tana::kernel {

enum class QueuePolicy { BlockProducer, DropNewest, Fail };

std::string_view to_string(QueuePolicy policy);

/// Multi-producer multi-consumer FIFO with a fixed capacity. What happens on a full queue
/// depends on the policy: wait for space, discard the incoming item, or throw QueueOverflow.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity = 4096, QueuePolicy policy = QueuePolicy::BlockProducer)
      : capacity_(capacity == 0 ? 1 : capacity), policy_(policy) {}

  BoundedQueue(const BoundedQueue&) = delete;
  BoundedQueue& operator=(const BoundedQueue&) = delete;

  /// False when the item was dropped or the queue is closed.
  bool push(T item) {
    std::unique_lock lock(mutex_);
    if (closed_) return false;
    if (items_.size() >= capacity_) {
      switch (policy_) {
        case QueuePolicy::DropNewest:
          ++dropped_;
          return false;
        case QueuePolicy::Fail:
          throw Error(ErrorCode::QueueOverflow, "output queue full at capacity " + std::to_string(capacity_));
        case QueuePolicy::BlockProducer:
          not_full_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
          if (closed_) return false;
          break;
      }
    }
    items_.push_back(std::move(item));
    not_empty_.notify_one();
    return true;
  }

  /// Blocks until an item arrives; nullopt once closed and drained.
  std::optional<T> pop() {
    std::unique_lock lock(mutex_);
    not_empty_.wait(lock, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return item;
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    not_empty_.notify_all();
    not_full_.notify_all();
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return items_.size();
  }
  std::size_t dropped() const {
    std::lock_guard lock(mutex_);
    return dropped_;
  }
  std::size_t capacity() const { return capacity_; }
  QueuePolicy policy() const { return policy_; }

 private:
  const std::size_t capacity_;
  const QueuePolicy policy_;
  mutable std::mutex mutex_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<T> items_;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

}  // namespace tana::kernel
