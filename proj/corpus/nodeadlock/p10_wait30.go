// Pattern: P10 wait30
// Expected: NoDeadlock
//
// A goroutine sleeps thirty seconds, then signals completion.
package main

import (
	"fmt"
	"time"
)

func main() {
	done := make(chan bool)
	go func() {
		time.Sleep(30 * time.Second)
		done <- true
	}()
	<-done
	fmt.Println("done after 30s")
}
