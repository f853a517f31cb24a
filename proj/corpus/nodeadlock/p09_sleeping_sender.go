// Pattern: P9 SleepingSender
// Expected: NoDeadlock
//
// The sender waits before sending; main blocks on the receive meanwhile.
package main

import (
	"fmt"
	"time"
)

func main() {
	ch := make(chan int)
	go func() {
		time.Sleep(500 * time.Millisecond)
		ch <- 42
	}()
	fmt.Println(<-ch)
}
